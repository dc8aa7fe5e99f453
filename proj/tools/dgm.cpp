// Command-line surface over the dg-module workbench: exact JSON in, exact
// JSON out.  Exit codes: 0 pass, 1 property failure, 2 input error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "dgm/workbench.hpp"

using namespace dgm;

namespace {

Workspace load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw field_error("cannot open " + path);
  return workspace_from_json(Json::parse(in));
}

const DgModule& module_of(const Workspace& w, const std::string& name) {
  auto it = w.modules.find(name);
  if (it == w.modules.end()) throw field_error("unknown module: " + name);
  return it->second;
}

std::string index_of(const Workspace& w) {
  if (w.indices.empty()) throw field_error("empty index set");
  return w.indices.front();
}

DgFam fam_of(const Workspace& w, const std::string& name) {
  return DgFam::single(index_of(w), module_of(w, name));
}

/// A named degree-0 map as a morphism of one-index families.
ChainFam cfam_of(const Workspace& w, const std::string& name) {
  auto it = w.maps.find(name);
  if (it == w.maps.end()) throw field_error("unknown map: " + name);
  if (it->second.degree != 0) throw field_error("map " + name + " is not of degree 0");
  const DgModule& s = module_of(w, it->second.source);
  const DgModule& t = module_of(w, it->second.target);
  ChainMap c(s, t, realize_map(w, name));  // validates the chain condition
  return ChainFam(DgFam::single(index_of(w), s), DgFam::single(index_of(w), t),
                  {{index_of(w), c}});
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

Json hom_json(const std::string& source, const std::string& target, const HomMap& h) {
  Json blocks = Json::object();
  for (const auto& [z, b] : h.src().degrees())
    if (h.tgt().rank(z + h.deg()) > 0 && !h.block(z).is_zero())
      blocks[std::to_string(z)] = matrix_json(h.block(z));
  return Json{{"degree", h.deg()}, {"source", source}, {"target", target},
              {"blocks", std::move(blocks)}};
}

Json classify_json(const ClassReport& rep) {
  return Json{{"weak_equivalence", rep.in_w}, {"fibration", rep.in_rf}};
}

std::string poly_str(const SemifreeAlgebra& a, const Poly& p) {
  if (p.terms.empty()) return "0";
  std::string out;
  for (const auto& [w, c] : p.terms) {
    if (!out.empty()) out += " + ";
    out += c.str();
    for (int g : w) out += "*" + a.label(g);
  }
  return out;
}

Field parse_field(const std::string& tag) {
  if (tag == "Q") return Field::rationals();
  if (tag == "graded") return Field::graded(5, 2);
  if (tag.size() > 1 && tag[0] == 'F') return Field::prime(std::stoul(tag.substr(1)));
  throw field_error("unknown field tag: " + tag + " (expected Q, F<p>, or graded)");
}

int cmd_homology(const std::string& file, const std::string& module) {
  Workspace w = load(file);
  const DgModule& m = module_of(w, module);
  Homology h(m);
  Json dims = Json::object();
  for (int z = m.gm().lo() - 1; z <= m.gm().hi() + 1; ++z)
    if (h.dim(z) > 0 || m.rank(z) > 0) dims[std::to_string(z)] = h.dim(z);
  emit(Json{{"module", module}, {"homology", dims}});
  return 0;
}

int cmd_cone(const std::string& file, const std::string& map) {
  Workspace w = load(file);
  ChainFam f = cfam_of(w, map);
  const std::string& src = w.maps.at(map).source;
  const std::string& tgt = w.maps.at(map).target;
  ConeBundle c = cone(f.at(index_of(w)));
  Workspace out;
  out.field = w.field;
  out.indices = w.indices;
  out.modules.emplace(src, c.alpha.src());
  out.modules.emplace(tgt, c.alpha.tgt());
  out.modules.emplace("cone", c.cone);
  out.modules.emplace("m1", c.m1);
  out.maps.emplace(map, as_named(src, tgt, c.alpha.hom()));
  out.maps.emplace("inj2", as_named(tgt, "cone", c.inj2.hom()));
  out.maps.emplace("proj", as_named("cone", "m1", c.proj.hom()));
  out.maps.emplace("inj1", as_named("m1", "cone", c.inj1));
  emit(workspace_json(out));
  return 0;
}

int cmd_adjoin(const std::string& file, const std::string& a_name, const std::string& m_name,
               const std::string& alpha_name, const std::string& instance, int cap) {
  Workspace w = load(file);
  if (instance == "identity") {
    DgFam a = fam_of(w, a_name);
    DgFam m = fam_of(w, m_name);
    ChainFam alpha = cfam_of(w, alpha_name);
    if (alpha.src() != m || alpha.tgt() != a)
      throw field_error("alpha must run from the attached module to the base object");
    IdentityInstance inst({index_of(w)});
    auto res = adjoin(inst, a, alpha);
    Workspace out;
    out.field = w.field;
    out.indices = w.indices;
    out.modules.emplace(a_name, a.at(index_of(w)));
    out.modules.emplace(m_name, m.at(index_of(w)));
    out.modules.emplace("D", res.ud.at(index_of(w)));
    out.maps.emplace("jbar", as_named(a_name, "D", res.jbar.at(index_of(w)).hom()));
    out.maps.emplace("theta", as_named(m_name, "D", res.theta.at(index_of(w))));
    emit(workspace_json(out));
    return 0;
  }
  if (instance != "tensor") throw field_error("unknown instance: " + instance);
  TensorInstance inst(w.field, cap, index_of(w));
  SemifreeAlgebra a = inst.F_ob(fam_of(w, a_name));
  DgFam m = fam_of(w, m_name);
  DgFam ua = inst.U_ob(a);
  // re-aim the named map's blocks at the materialized underlying module
  HomMap raw = realize_map(w, alpha_name);
  if (w.maps.at(alpha_name).degree != 0) throw field_error("alpha must have degree 0");
  HomMap h(m.at(index_of(w)).gm(), ua.at(index_of(w)).gm(), 0);
  for (const auto& [z, lab] : m.at(index_of(w)).gm().degrees()) {
    if (ua.at(index_of(w)).rank(z) == 0) continue;
    Mat b = raw.block(z);
    if (b.cols() != ua.at(index_of(w)).rank(z))
      throw field_error("alpha block at degree " + std::to_string(z) +
                        " does not match the underlying module of the free algebra");
    h.set_block(z, b);
  }
  ChainMap c(m.at(index_of(w)), ua.at(index_of(w)), h);
  ChainFam alpha(m, ua, {{index_of(w), c}});
  auto res = adjoin(inst, a, alpha);
  Json gens = Json::array();
  for (int i = 0; i < res.d.size(); ++i)
    gens.push_back(Json{{"label", res.d.label(i)},
                        {"degree", res.d.deg(i)},
                        {"differential", poly_str(res.d, res.d.dgen(i))}});
  Workspace out;
  out.field = w.field;
  out.indices = w.indices;
  out.modules.emplace(m_name, m.at(index_of(w)));
  out.modules.emplace("UA", ua.at(index_of(w)));
  out.modules.emplace("UD", res.ud.at(index_of(w)));
  out.maps.emplace("U_jbar", as_named("UA", "UD", res.ujbar.at(index_of(w)).hom()));
  out.maps.emplace("theta", as_named(m_name, "UD", res.theta.at(index_of(w))));
  Json j = workspace_json(out);
  j["generators"] = std::move(gens);
  emit(j);
  return 0;
}

int cmd_factor(const std::string& file, const std::string& map, const std::string& mode,
               int stages) {
  Workspace w = load(file);
  ChainFam f = cfam_of(w, map);
  IdentityInstance inst({index_of(w)});
  const std::string& src = w.maps.at(map).source;
  const std::string& tgt = w.maps.at(map).target;
  Workspace out;
  out.field = w.field;
  out.indices = w.indices;
  out.modules.emplace(src, f.src().at(index_of(w)));
  out.modules.emplace(tgt, f.tgt().at(index_of(w)));
  if (mode == "tc-f") {
    auto fac = factor_trivcof_fib(inst, f, f.src(), f.tgt());
    bool ok = compose(fac.stc.jbar, fac.p) == f && fac.jbar_report.in_w && fac.p_report.in_rf &&
              witness_valid(inst, witness_of(fac.stc));
    out.modules.emplace("Z", fac.stc.z().at(index_of(w)));
    out.maps.emplace("jbar", as_named(src, "Z", fac.stc.jbar.at(index_of(w)).hom()));
    out.maps.emplace("p", as_named("Z", tgt, fac.p.at(index_of(w)).hom()));
    Json j = workspace_json(out);
    j["report"] = Json{{"pass", ok},
                       {"composite_equals_f", compose(fac.stc.jbar, fac.p) == f},
                       {"jbar", classify_json(fac.jbar_report)},
                       {"p", classify_json(fac.p_report)},
                       {"witness_valid", witness_valid(inst, witness_of(fac.stc))}};
    emit(j);
    return ok ? 0 : 1;
  }
  if (mode != "c-tf") throw field_error("unknown mode: " + mode + " (expected tc-f or c-tf)");
  auto fac = factor_cof_trivfib(inst, f, f.src(), f.tgt(), stages);
  ChainFam composite = fac.witness.steps.empty() ? ChainFam::identity(f.src()) : fac.witness.composite;
  bool composed = compose(composite, fac.p) == f;
  bool ok = composed;
  for (bool b : fac.cycles_die) ok = ok && b;
  for (bool b : fac.connecting_zero) ok = ok && b;
  for (size_t i = 2; i < fac.q_epi.size(); ++i) ok = ok && fac.q_epi[i];
  if (!fac.stages_exhausted) ok = ok && fac.p_report.in_w_rf();
  out.modules.emplace("Z", fac.p.src().at(index_of(w)));
  out.maps.emplace("j", as_named(src, "Z", composite.at(index_of(w)).hom()));
  out.maps.emplace("p", as_named("Z", tgt, fac.p.at(index_of(w)).hom()));
  Json j = workspace_json(out);
  j["report"] = Json{{"pass", ok},
                     {"composite_equals_f", composed},
                     {"stages_used", fac.stages_used},
                     {"early_stop", fac.early_stop},
                     {"stages_exhausted", fac.stages_exhausted},
                     {"q_epi", fac.q_epi},
                     {"cycles_die", fac.cycles_die},
                     {"connecting_zero", fac.connecting_zero},
                     {"p", classify_json(fac.p_report)}};
  emit(j);
  return ok ? 0 : 1;
}

int cmd_lift(const std::string& file, const std::string& square, const std::string& kind) {
  Workspace w = load(file);
  std::vector<std::string> names;
  for (size_t pos = 0, next; pos <= square.size(); pos = next + 1) {
    next = square.find(',', pos);
    if (next == std::string::npos) next = square.size();
    names.push_back(square.substr(pos, next - pos));
  }
  if (names.size() != 4) throw field_error("--square expects i,a,b,g");
  ChainFam i = cfam_of(w, names[0]), a = cfam_of(w, names[1]), b = cfam_of(w, names[2]),
           g = cfam_of(w, names[3]);
  IdentityInstance inst({index_of(w)});
  if (kind == "tcof-fib") {
    if (!classify(inst, i).in_w) throw precondition_error("left map is not a weak equivalence");
    if (!is_epi(g)) throw precondition_error("right map is not a fibration");
  } else if (kind == "cof-tfib") {
    if (!classify(inst, g).in_w_rf())
      throw precondition_error("right map is not a trivial fibration");
  } else {
    throw field_error("unknown kind: " + kind + " (expected tcof-fib or cof-tfib)");
  }
  auto filler = solve_lift(i, g, a, b);
  if (!filler) {
    emit(Json{{"pass", false}, {"detail", "no filler exists"}});
    return 1;
  }
  bool ok = compose(i, *filler) == a && compose(*filler, g) == b;
  Json j;
  j["pass"] = ok;
  j["filler"] = hom_json(w.maps.at(names[0]).target, w.maps.at(names[3]).source,
                         filler->at(index_of(w)).hom());
  emit(j);
  return ok ? 0 : 1;
}

int cmd_retract(const std::string& file, const std::string& map) {
  Workspace w = load(file);
  ChainFam f = cfam_of(w, map);
  IdentityInstance inst({index_of(w)});
  if (!classify(inst, f).in_w) throw precondition_error("map is not a weak equivalence");
  auto fac = factor_trivcof_fib(inst, f, f.src(), f.tgt());
  auto filler = solve_lift(f, fac.p, fac.stc.jbar, ChainFam::identity(f.tgt()));
  if (!filler) throw precondition_error("no filler available for the retract square");
  auto ret = retract_presentation<IdentityInstance>(inst, f, f.src(), f.tgt(), nullptr,
                                                    &*filler);
  bool ok = compose(f, ret.w) == ret.factorization.stc.jbar &&
            compose(ret.w, ret.factorization.p) == ChainFam::identity(f.tgt()) &&
            compose(ret.factorization.stc.jbar, ret.factorization.p) == f;
  const std::string& src = w.maps.at(map).source;
  const std::string& tgt = w.maps.at(map).target;
  Workspace out;
  out.field = w.field;
  out.indices = w.indices;
  out.modules.emplace(src, f.src().at(index_of(w)));
  out.modules.emplace(tgt, f.tgt().at(index_of(w)));
  out.modules.emplace("Z", ret.factorization.stc.z().at(index_of(w)));
  out.maps.emplace("jbar", as_named(src, "Z", ret.factorization.stc.jbar.at(index_of(w)).hom()));
  out.maps.emplace("p", as_named("Z", tgt, ret.factorization.p.at(index_of(w)).hom()));
  out.maps.emplace("w", as_named(tgt, "Z", ret.w.at(index_of(w)).hom()));
  Json j = workspace_json(out);
  j["report"] = Json{{"pass", ok},
                     {"f_w_equals_jbar", compose(f, ret.w) == ret.factorization.stc.jbar},
                     {"w_p_equals_identity",
                      compose(ret.w, ret.factorization.p) == ChainFam::identity(f.tgt())},
                     {"jbar_p_equals_f", compose(ret.factorization.stc.jbar, ret.factorization.p) == f}};
  emit(j);
  return ok ? 0 : 1;
}

int cmd_check_axioms(int trials, std::uint64_t seed, const std::vector<std::string>& field_tags,
                     const std::vector<std::string>& instances, int jobs) {
  SuiteConfig cfg;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.jobs = jobs;
  if (!field_tags.empty()) {
    cfg.fields.clear();
    for (const auto& t : field_tags) cfg.fields.push_back(parse_field(t));
  }
  if (!instances.empty()) cfg.instances = instances;
  SuiteReport rep = run_axiom_suite(cfg);
  emit(report_json(rep));
  return rep.pass ? 0 : 1;
}

int cmd_verify_hypothesis(const std::string& instance, int p, const std::string& window,
                          std::uint64_t seed, int trials) {
  auto colon = window.find(':');
  if (colon == std::string::npos) throw field_error("--window expects lo:hi");
  int lo = std::stoi(window.substr(0, colon)), hi = std::stoi(window.substr(colon + 1));
  Json results = Json::array();
  bool pass = true;
  SplitMix64 seeder(seed);
  for (int t = 0; t < trials; ++t) {
    SplitMix64 rng(seeder.fork_seed());
    const Field f = t % 2 ? Field::prime(5) : Field::rationals();
    HypothesisCertificate cert;
    if (instance == "identity") {
      IdentityInstance inst({"x", "y"});
      DgFam a = detail::random_fam(rng, f, inst.indices(), -2, 2, 3, 2);
      cert = verify_theorem_hypothesis(inst, a, f, "x", p, lo, hi);
    } else if (instance == "tensor") {
      if (p > -2) throw precondition_error("the tensor instance needs p <= -2");
      if (lo < 0) throw precondition_error("the tensor window starts at 0");
      TensorInstance inst(f, hi + 1);
      SemifreeAlgebra a = random_semifree(rng, inst, 2, 2, 5);
      cert = verify_theorem_hypothesis(inst, a, f, "x", p, lo, hi);
    } else {
      throw field_error("unknown instance: " + instance);
    }
    pass = pass && cert.pass;
    Json dims = Json::object();
    for (const auto& [s, per_deg] : cert.dims) {
      Json d = Json::object();
      for (const auto& [z, pr] : per_deg)
        d[std::to_string(z)] = Json::array({pr.first, pr.second});
      dims[s] = std::move(d);
    }
    Json c{{"pass", cert.pass}, {"field", field_json(f)}, {"homology_dims", std::move(dims)}};
    if (!cert.pass) {
      c["failing_index"] = cert.failing_index;
      c["failing_degree"] = cert.failing_degree;
    }
    results.push_back(std::move(c));
  }
  emit(Json{{"pass", pass}, {"instance", instance}, {"p", p}, {"trials", trials},
            {"certificates", std::move(results)}});
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact workbench for dg modules over graded rings"};
  app.require_subcommand(1);

  std::string file, module, map, a_name, m_name, alpha_name, square;
  std::string instance = "identity", mode = "tc-f", kind = "tcof-fib", window = "0:6";
  int stages = 4, cap = 7, trials = 20, jobs = 1, p = -2;
  std::uint64_t seed = 0;
  std::vector<std::string> field_tags, instances;

  auto* hom = app.add_subcommand("homology", "Homology dimensions of a module");
  hom->add_option("file", file)->required();
  hom->add_option("module", module)->required();

  auto* cn = app.add_subcommand("cone", "Cone of a chain map with its bundle maps");
  cn->add_option("file", file)->required();
  cn->add_option("map", map)->required();

  auto* ad = app.add_subcommand("adjoin", "Adjoin a module along an attaching map");
  ad->add_option("file", file)->required();
  ad->add_option("--A", a_name, "base object (identity: module; tensor: free algebra on it)")
      ->required();
  ad->add_option("--M", m_name, "attached module")->required();
  ad->add_option("--alpha", alpha_name, "attaching map")->required();
  ad->add_option("--instance", instance, "identity|tensor");
  ad->add_option("--cap", cap, "tensor window cap");

  auto* fc = app.add_subcommand("factor", "Factor a morphism through the middle object");
  fc->add_option("file", file)->required();
  fc->add_option("map", map)->required();
  fc->add_option("--mode", mode, "tc-f (trivial cofibration, fibration) or c-tf");
  fc->add_option("--stages", stages, "stage budget for c-tf");

  auto* lf = app.add_subcommand("lift", "Fill a commuting lifting square");
  lf->add_option("file", file)->required();
  lf->add_option("--square", square, "i,a,b,g: left, top, bottom, right map names")->required();
  lf->add_option("--kind", kind, "tcof-fib|cof-tfib");

  auto* rt = app.add_subcommand("retract", "Present a weak equivalence as a retract");
  rt->add_option("file", file)->required();
  rt->add_option("map", map)->required();

  auto* ca = app.add_subcommand("check-axioms", "Run the randomized axiom suites");
  ca->add_option("--trials", trials);
  ca->add_option("--seed", seed);
  ca->add_option("--field", field_tags, "Q, F<p>, or graded (repeatable)");
  ca->add_option("--instances", instances, "identity, tensor (repeatable)");
  ca->add_option("--jobs", jobs, "parallel check execution (default sequential)");

  auto* vh = app.add_subcommand("verify-hypothesis", "Theorem-hypothesis certificates");
  vh->add_option("--instance", instance, "identity|tensor")->required();
  vh->add_option("--p", p, "shift of the attached cone")->required();
  vh->add_option("--window", window, "lo:hi verification window");
  vh->add_option("--seed", seed);
  vh->add_option("--trials", trials);

  try {
    app.parse(argc, argv);
    if (hom->parsed()) return cmd_homology(file, module);
    if (cn->parsed()) return cmd_cone(file, map);
    if (ad->parsed()) return cmd_adjoin(file, a_name, m_name, alpha_name, instance, cap);
    if (fc->parsed()) return cmd_factor(file, map, mode, stages);
    if (lf->parsed()) return cmd_lift(file, square, kind);
    if (rt->parsed()) return cmd_retract(file, map);
    if (ca->parsed()) return cmd_check_axioms(trials, seed, field_tags, instances, jobs);
    if (vh->parsed()) return cmd_verify_hypothesis(instance, p, window, seed, trials);
    return 2;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const precondition_error& e) {
    emit(Json{{"error", e.what()}});
    return 1;
  } catch (const membership_error& e) {
    emit(Json{{"error", e.what()}});
    return 1;
  } catch (const window_error& e) {
    emit(Json{{"error", e.what()}});
    return 1;
  } catch (const std::exception& e) {
    emit(Json{{"error", e.what()}});
    return 2;
  }
}
