#ifndef DGM_MODEL_HPP
#define DGM_MODEL_HPP

#include "adjoin.hpp"

namespace dgm {

// ---------------------------------------------------------------------------
// Class membership

struct ClassReport {
  bool in_w = true;
  bool in_rf = true;
  // per index, per degree: (source homology dim, target homology dim,
  // induced rank) and (matrix rank, target rank)
  std::map<std::string, std::map<int, std::array<int, 3>>> homology;
  std::map<std::string, std::map<int, std::pair<int, int>>> surjectivity;
  bool in_w_rf() const { return in_w && in_rf; }
};

template <class Inst>
ClassReport classify(const Inst& inst, const typename Inst::Mor& mor) {
  ChainFam f = inst.U_mor(mor);
  ClassReport rep;
  for (const auto& s : f.src().indices()) {
    const ChainMap& c = f.at(s);
    Homology hs(c.src()), ht(c.tgt());
    int lo = std::min(c.src().gm().lo(), c.tgt().gm().lo());
    int hi = std::max(c.src().gm().hi(), c.tgt().gm().hi());
    for (int z = lo; z <= hi; ++z) {
      int a = hs.dim(z), b = ht.dim(z);
      int r = (a && b) ? rank(induced_on_homology(c, hs, ht, z)) : 0;
      rep.homology[s][z] = {a, b, r};
      if (a != b || r != a) rep.in_w = false;
      int tr = c.tgt().rank(z);
      int mr = tr ? rank(c.block(z)) : 0;
      rep.surjectivity[s][z] = {mr, tr};
      if (mr != tr) rep.in_rf = false;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Cofibration witnesses

/// Sequence of elementary steps A -> A<M_i, alpha_i> with each M_i free with
/// zero differential; the composite is the witnessed morphism.
template <class Inst>
struct CofibrationWitness {
  std::vector<AdjoinResult<Inst>> steps;
  typename Inst::Mor composite;
};

template <class Inst>
bool witness_valid(const Inst& inst, const CofibrationWitness<Inst>& w) {
  if (w.steps.empty()) return false;
  typename Inst::Mor acc = w.steps.front().jbar;
  for (const auto& st : w.steps) {
    for (const auto& s : st.m.indices())
      if (!st.m.at(s).d().is_zero()) return false;
  }
  for (size_t i = 1; i < w.steps.size(); ++i) acc = inst.compose_mor(acc, w.steps[i].jbar);
  return inst.mor_equal(acc, w.composite);
}

// ---------------------------------------------------------------------------
// The standard trivial cofibration X -> X<M,0> with M[1] = Cone 1_{N[-1]},
// realized as two elementary steps adjoining N[-2] and then N[-1].

template <class Inst>
struct StdTrivCof {
  DgFam n;  // free with zero differential
  AdjoinResult<Inst> step1;  // X<N[-2], 0>
  AdjoinResult<Inst> step2;  // D1<N[-1], alpha2>
  typename Inst::Mor jbar;   // the composite X -> Z
  const typename Inst::Obj& z() const { return step2.d; }
};

template <class Inst>
StdTrivCof<Inst> make_std_trivcof(const Inst& inst, const typename Inst::Obj& x, const DgFam& n) {
  for (const auto& s : n.indices())
    if (!n.at(s).d().is_zero()) throw precondition_error("make_std_trivcof: N must have d = 0");
  DgFam ux = inst.U_ob(x);
  DgFam m1 = shift_fam(n, -2);
  AdjoinResult<Inst> step1 = adjoin(inst, x, ChainFam::zero(m1, ux));
  // alpha2 sends the degree |y|+1 generator to the theta-image of the
  // degree |y|+2 one; chain because (theta1)d = 0 here
  HomFam rho = sigma_inverse_fam(m1, 1);  // N[-1] -> N[-2], degree +1
  ChainFam alpha2 = as_chain(compose(rho, step1.theta));
  AdjoinResult<Inst> step2 = adjoin(inst, step1.d, alpha2);
  return StdTrivCof<Inst>{n, step1, step2, inst.compose_mor(step1.jbar, step2.jbar)};
}

template <class Inst>
CofibrationWitness<Inst> witness_of(const StdTrivCof<Inst>& stc) {
  return CofibrationWitness<Inst>{{stc.step1, stc.step2}, stc.jbar};
}

/// Morphisms Z -> B are freely parametrized by (c0: X -> B, s2: N[-1] -> U B
/// of degree -1); pack and unpack are mutually inverse.
template <class Inst>
struct StdTrivCofParam {
  typename Inst::Mor c0;
  HomFam s2;
};

template <class Inst>
typename Inst::Mor stc_pack(const Inst& inst, const StdTrivCof<Inst>& stc,
                            const typename Inst::Mor& c0, const HomFam& s2) {
  DgFam ub = s2.tgt();
  HomFam tau = sigma_inverse_fam(shift_fam(stc.n, -1), -1);  // N[-2] -> N[-1], degree -1
  HomFam s1 = compose(compose(tau, s2), d_fam(ub));
  typename Inst::Mor c1 = psi_inverse(inst, stc.step1, HPair<Inst>{c0, s1});
  return psi_inverse(inst, stc.step2, HPair<Inst>{c1, s2});
}

template <class Inst>
StdTrivCofParam<Inst> stc_unpack(const Inst& inst, const StdTrivCof<Inst>& stc,
                                 const typename Inst::Mor& k) {
  HPair<Inst> p2 = psi(inst, stc.step2, k);
  HPair<Inst> p1 = psi(inst, stc.step1, p2.f);
  return StdTrivCofParam<Inst>{p1.f, p2.t};
}

// ---------------------------------------------------------------------------
// MC5(ii): trivial cofibration followed by a fibration

template <class Inst>
struct TrivcofFibFactorization {
  StdTrivCof<Inst> stc;
  typename Inst::Mor p;  // Z -> Y
  ClassReport jbar_report;  // expect in W
  ClassReport p_report;     // expect in R_f
};

/// The free module on the chosen basis of U Y, zero differential.
inline DgFam free_on_basis_of(const DgFam& uy) {
  std::map<std::string, DgModule> at;
  for (const auto& s : uy.indices()) {
    std::map<int, std::vector<std::string>> basis;
    for (const auto& [z, b] : uy.at(s).gm().degrees()) {
      std::vector<std::string> lab;
      for (const auto& y : b) lab.push_back("e_" + y);
      if (!lab.empty()) basis[z] = std::move(lab);
    }
    at.emplace(s, DgModule(GradedModule(uy.field(), std::move(basis))));
  }
  return DgFam(uy.field(), uy.indices(), std::move(at));
}

template <class Inst>
TrivcofFibFactorization<Inst> factor_trivcof_fib(const Inst& inst, const typename Inst::Mor& f,
                                                 const typename Inst::Obj& x,
                                                 const typename Inst::Obj& y) {
  DgFam uy = inst.U_ob(y);
  DgFam n = free_on_basis_of(uy);
  StdTrivCof<Inst> stc = make_std_trivcof(inst, x, n);
  // s2: the generator named after y maps to y itself (identity blocks,
  // reindexed); then U p is surjective by construction
  DgFam n1 = shift_fam(n, -1);
  HomFam s2(n1, uy, -1);
  for (const auto& s : n1.indices()) {
    HomMap h(n1.at(s).gm(), uy.at(s).gm(), -1);
    for (const auto& [z, b] : n1.at(s).gm().degrees()) {
      int cols = uy.at(s).rank(z - 1);
      if (cols == 0) continue;
      h.set_block(z, Mat::identity(uy.field(), cols));
    }
    s2.set(s, h);
  }
  typename Inst::Mor p = stc_pack(inst, stc, f, s2);
  TrivcofFibFactorization<Inst> out{stc, p, classify(inst, stc.jbar), classify(inst, p)};
  if (!inst.mor_equal(inst.compose_mor(stc.jbar, p), f))
    throw field_error("factor_trivcof_fib: composite mismatch");
  if (!out.jbar_report.in_w) throw field_error("factor_trivcof_fib: jbar not in W");
  if (!out.p_report.in_rf) throw field_error("factor_trivcof_fib: p not surjective");
  return out;
}

// ---------------------------------------------------------------------------
// MC4 lifts

/// Filler for a standard trivial cofibration (two-step package) against a
/// fibration g: per generator, choose preimages through the surjective U g.
template <class Inst>
typename Inst::Mor lift_standard_trivcof_vs_fib(const Inst& inst, const StdTrivCof<Inst>& stc,
                                                const typename Inst::Mor& g,
                                                const typename Inst::Mor& a,
                                                const typename Inst::Mor& b) {
  if (!classify(inst, g).in_rf) throw precondition_error("lift: g is not a fibration");
  if (!inst.mor_equal(inst.compose_mor(stc.jbar, b), inst.compose_mor(a, g)))
    throw precondition_error("lift: square does not commute");
  StdTrivCofParam<Inst> pb = stc_unpack(inst, stc, b);
  ChainFam ug = inst.U_mor(g);
  HomFam s2(pb.s2.src(), ug.src(), -1);
  for (const auto& s : s2.src().indices()) {
    HomMap h(s2.src().at(s).gm(), ug.src().at(s).gm(), -1);
    for (const auto& [z, lab] : s2.src().at(s).gm().degrees()) {
      int cols = ug.src().at(s).rank(z - 1);
      if (cols == 0) {
        if (!pb.s2.at(s).block(z).is_zero())
          throw precondition_error("lift: no room for preimage");
        continue;
      }
      Mat m(ug.src().field(), static_cast<int>(lab.size()), cols);
      Mat gblk = ug.at(s).block(z - 1);
      Mat target = pb.s2.at(s).block(z);
      for (int i = 0; i < m.rows(); ++i) {
        auto sol = solve_right(gblk, target.row(i));
        if (!sol) throw precondition_error("lift: U g not surjective where needed");
        for (int j = 0; j < cols; ++j) m.at(i, j) = (*sol)[j];
      }
      h.set_block(z, m);
    }
    s2.set(s, h);
  }
  typename Inst::Mor c = stc_pack(inst, stc, a, s2);
  if (!inst.mor_equal(inst.compose_mor(stc.jbar, c), a) ||
      !inst.mor_equal(inst.compose_mor(c, g), b))
    throw field_error("lift: triangles failed");
  return c;
}

/// Filler for a standard cofibration witness (elementary steps, each M free
/// with d = 0) against y in W ∩ R_f, built stage by stage through the
/// constructive lifting lemma.
template <class Inst>
typename Inst::Mor lift_standard_cof_vs_trivfib(const Inst& inst,
                                                const CofibrationWitness<Inst>& wit,
                                                const typename Inst::Mor& y,
                                                const typename Inst::Mor& u,
                                                const typename Inst::Mor& v) {
  if (!witness_valid(inst, wit)) throw precondition_error("lift: invalid witness");
  ClassReport rep = classify(inst, y);
  if (!rep.in_w_rf()) throw precondition_error("lift: y is not a trivial fibration");
  if (!inst.mor_equal(inst.compose_mor(wit.composite, v), inst.compose_mor(u, y)))
    throw precondition_error("lift: square does not commute");
  ChainFam uy = inst.U_mor(y);
  // rest[i]: D_i -> V (composite of the remaining jbars with v)
  std::vector<typename Inst::Mor> rest(wit.steps.size());
  {
    typename Inst::Mor acc = v;
    for (size_t i = wit.steps.size(); i-- > 0;) {
      rest[i] = acc;
      if (i > 0) acc = inst.compose_mor(wit.steps[i].jbar, acc);
    }
  }
  typename Inst::Mor cur = u;  // D_{i} -> U target of y, built inductively
  for (size_t i = 0; i < wit.steps.size(); ++i) {
    const AdjoinResult<Inst>& st = wit.steps[i];
    ChainFam ucur = inst.U_mor(cur);
    HomFam t = compose(st.theta, inst.U_mor(rest[i]));
    HomFam alpha_u = compose(to_hom(st.alpha), ucur);
    HomFam r(st.m, ucur.tgt(), -1);
    for (const auto& s : st.m.indices()) {
      const GradedModule& mg = st.m.at(s).gm();
      HomMap h(mg, ucur.tgt().at(s).gm(), -1);
      for (const auto& [z, lab] : mg.degrees()) {
        int cols = ucur.tgt().at(s).rank(z - 1);
        Mat m(mg.field(), static_cast<int>(lab.size()), cols);
        for (int i2 = 0; i2 < m.rows(); ++i2) {
          std::vector<Scalar> e(mg.rank(z), Scalar::zero(mg.field()));
          e[i2] = Scalar::one(mg.field());
          auto uarg = row_times(e, alpha_u.at(s).block(z));
          auto varg = row_times(e, t.at(s).block(z));
          auto w = lift_through_surjective_qiso(uy.at(s), z - 1, uarg, varg);
          for (int j = 0; j < cols; ++j) m.at(i2, j) = w[j];
        }
        if (cols) h.set_block(z, m);
      }
      r.set(s, h);
    }
    typename Inst::Mor w = psi_inverse(inst, st, HPair<Inst>{cur, r});
    if (!inst.mor_equal(inst.compose_mor(st.jbar, w), cur) ||
        !inst.mor_equal(inst.compose_mor(w, y), rest[i]))
      throw field_error("lift: stage triangles failed");
    cur = w;
  }
  return cur;
}

// ---------------------------------------------------------------------------
// MC5(i): cofibration followed by a trivial fibration, stagewise

template <class Inst>
struct CofTrivfibFactorization {
  CofibrationWitness<Inst> witness;  // X -> D_m (may be a lone identity-free list)
  typename Inst::Mor p;              // D_m -> Y, the last q
  std::vector<typename Inst::Mor> q;  // q_0 = f, ..., q_m
  int stages_used = 0;
  bool early_stop = false;
  bool stages_exhausted = false;
  std::vector<bool> q_epi;           // per stage index, U q_m surjective
  std::vector<bool> cycles_die;      // per built stage
  std::vector<bool> connecting_zero; // H(Cone U q_m) -> H(Cone U q_{m+1}) zero
  ClassReport p_report;
};

/// Zero-ness of the map induced on cone homology by a stage map.
template <class Inst>
bool connecting_homology_zero(const Inst& inst, const typename Inst::Mor& h,
                              const typename Inst::Mor& qm, const typename Inst::Mor& qn) {
  ChainFam uh = inst.U_mor(h), uqm = inst.U_mor(qm), uqn = inst.U_mor(qn);
  for (const auto& s : uqm.src().indices()) {
    ConeBundle c1 = cone(uqm.at(s));
    ConeBundle c2 = cone(uqn.at(s));
    ChainMap gamma = cone_map(c1, c2, uh.at(s), ChainMap::identity(uqm.tgt().at(s)));
    Homology h1(c1.cone), h2(c2.cone);
    int lo = c1.cone.gm().lo(), hi = c1.cone.gm().hi();
    for (int z = lo; z <= hi; ++z)
      if (h1.dim(z) && h2.dim(z) && rank(induced_on_homology(gamma, h1, h2, z)) != 0) return false;
  }
  return true;
}

template <class Inst>
CofTrivfibFactorization<Inst> factor_cof_trivfib(const Inst& inst, const typename Inst::Mor& f,
                                                 const typename Inst::Obj& x,
                                                 const typename Inst::Obj& y, int max_stages) {
  if (max_stages < 2) throw precondition_error("factor_cof_trivfib: need at least two stages");
  CofTrivfibFactorization<Inst> out;
  typename Inst::Obj d = x;
  typename Inst::Mor q = f;
  out.q.push_back(q);
  for (int m = 0; m <= max_stages; ++m) {
    ClassReport rep = classify(inst, q);
    out.q_epi.push_back(rep.in_rf);
    if (rep.in_w_rf()) {
      // early termination: q is already a trivial fibration
      out.early_stop = m < max_stages;
      out.stages_used = m;
      out.p = q;
      out.p_report = rep;
      out.witness.composite = out.witness.steps.empty()
                                  ? inst.identity_mor(d)
                                  : out.witness.composite;
      return out;
    }
    if (m == max_stages) break;
    CycleKillerStage<Inst> st = cycle_killer_stage(inst, d, y, q);
    out.cycles_die.push_back(st.cycles_die);
    out.connecting_zero.push_back(connecting_homology_zero(inst, st.stage.jbar, q, st.q));
    out.witness.steps.push_back(st.stage);
    out.witness.composite = out.witness.steps.size() == 1
                                ? st.stage.jbar
                                : inst.compose_mor(out.witness.composite, st.stage.jbar);
    d = st.stage.d;
    q = st.q;
    out.q.push_back(q);
    out.stages_used = m + 1;
  }
  out.p = q;
  out.p_report = classify(inst, q);
  out.stages_exhausted = !out.p_report.in_w_rf();
  return out;
}

// ---------------------------------------------------------------------------
// Retracts

template <class Inst>
struct RetractPresentation {
  TrivcofFibFactorization<Inst> factorization;  // f = jbar · p
  typename Inst::Mor w;                         // Y -> Z with f·w = jbar, w·p = 1
};

template <class Inst>
RetractPresentation<Inst> retract_presentation(const Inst& inst, const typename Inst::Mor& f,
                                               const typename Inst::Obj& x,
                                               const typename Inst::Obj& y,
                                               const CofibrationWitness<Inst>* fwitness,
                                               const typename Inst::Mor* supplied_filler) {
  if (!classify(inst, f).in_w) throw precondition_error("retract: f is not a weak equivalence");
  TrivcofFibFactorization<Inst> fac = factor_trivcof_fib(inst, f, x, y);
  typename Inst::Mor w = [&] {
    if (supplied_filler) return *supplied_filler;
    if (!fwitness)
      throw precondition_error("retract: no filler available (no witness, none supplied)");
    // fill the square (f cofibration-witnessed) vs (p trivial fibration)
    return lift_standard_cof_vs_trivfib(inst, *fwitness, fac.p, fac.stc.jbar,
                                        inst.identity_mor(y));
  }();
  if (!inst.mor_equal(inst.compose_mor(f, w), fac.stc.jbar) ||
      !inst.mor_equal(inst.compose_mor(w, fac.p), inst.identity_mor(y)))
    throw field_error("retract: identities failed");
  return RetractPresentation<Inst>{fac, w};
}

}  // namespace dgm

#endif
