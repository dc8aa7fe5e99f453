#include <catch2/catch_amalgamated.hpp>

#include "dgm/instances.hpp"
#include "dgm/model.hpp"

using namespace dgm;

static const Field Q = Field::rationals();

static DgFam random_fam(SplitMix64& rng, const Field& f, const std::vector<std::string>& idx,
                        int lo, int hi, int max_units, int max_cones) {
  std::map<std::string, DgModule> at;
  for (const auto& s : idx)
    at.emplace(s, random_dg(rng, f, lo, hi, static_cast<int>(rng.below(max_units + 1)),
                            static_cast<int>(rng.below(max_cones + 1))));
  return DgFam(f, idx, std::move(at));
}

static ChainFam random_cfam(SplitMix64& rng, const DgFam& s, const DgFam& t) {
  std::map<std::string, ChainMap> at;
  for (const auto& i : s.indices()) at.emplace(i, random_chain_map(rng, s.at(i), t.at(i)));
  return ChainFam(s, t, std::move(at));
}

static HomFam random_hfam(SplitMix64& rng, const DgFam& s, const DgFam& t, int deg) {
  HomFam h(s, t, deg);
  for (const auto& i : s.indices()) h.set(i, random_hom(rng, s.at(i).gm(), t.at(i).gm(), deg));
  return h;
}

static DgFam free_fam(SplitMix64& rng, const Field& f, const std::vector<std::string>& idx,
                      int lo, int hi, int max_per_deg) {
  std::map<std::string, DgModule> at;
  for (const auto& s : idx) {
    std::map<int, std::vector<std::string>> basis;
    for (int z = lo; z <= hi; ++z) {
      int n = static_cast<int>(rng.below(max_per_deg + 1));
      std::vector<std::string> lab;
      for (int i = 0; i < n; ++i) lab.push_back("n" + std::to_string(z) + "_" + std::to_string(i));
      if (n) basis[z] = std::move(lab);
    }
    at.emplace(s, DgModule(GradedModule(f, std::move(basis))));
  }
  return DgFam(f, idx, std::move(at));
}

/// Surjective quasi-isomorphism with source and target generated on the fly.
static ChainFam random_sq_fam(SplitMix64& rng, const Field& f,
                              const std::vector<std::string>& idx, int lo, int hi) {
  std::map<std::string, DgModule> src, tgt;
  std::map<std::string, ChainMap> at;
  for (const auto& s : idx) {
    SurjectiveQiso sq = random_surjective_qiso(rng, f, lo, hi, 2, 1, 2);
    src.emplace(s, sq.map.src());
    tgt.emplace(s, sq.map.tgt());
    at.emplace(s, sq.map);
  }
  DgFam u(f, idx, std::move(src)), v(f, idx, std::move(tgt));
  return ChainFam(u, v, std::move(at));
}

static DgFam on_all(const Field& f, const std::vector<std::string>& idx, const DgModule& m) {
  std::map<std::string, DgModule> at;
  for (const auto& s : idx) at.emplace(s, m);
  return DgFam(f, idx, std::move(at));
}

/// Chain isomorphism out of a prescribed source (scrambled basis).
static ChainFam random_iso_from(SplitMix64& rng, const DgFam& x) {
  std::map<std::string, DgModule> tgt;
  std::map<std::string, ChainMap> at;
  for (const auto& s : x.indices()) {
    ConjugatedDg c = conjugate_dg(rng, x.at(s));
    tgt.emplace(s, c.module);
    at.emplace(s, invert(c.to_original));
  }
  DgFam t(x.field(), x.indices(), std::move(tgt));
  return ChainFam(x, t, std::move(at));
}

/// Quasi-isomorphism out of a prescribed source: scrambled twin plus a
/// null-homotopic perturbation.
static ChainFam random_qiso_from(SplitMix64& rng, const DgFam& x) {
  std::map<std::string, DgModule> tgt;
  std::map<std::string, ChainMap> at;
  for (const auto& s : x.indices()) {
    ConjugatedDg c = conjugate_dg(rng, x.at(s));
    ChainMap iso = invert(c.to_original);
    HomMap pert =
        map_boundary(x.at(s), c.module, random_hom(rng, x.at(s).gm(), c.module.gm(), -1));
    tgt.emplace(s, c.module);
    at.emplace(s, ChainMap(x.at(s), c.module, iso.hom() + pert));
  }
  DgFam t(x.field(), x.indices(), std::move(tgt));
  return ChainFam(x, t, std::move(at));
}

TEST_CASE("morphism classification") {
  IdentityInstance inst({"*"});
  SECTION("identity is a trivial fibration") {
    SplitMix64 rng(201);
    DgFam a = DgFam::single("*", random_dg(rng, Q, -1, 2, 2, 1));
    ClassReport rep = classify(inst, ChainFam::identity(a));
    CHECK(rep.in_w);
    CHECK(rep.in_rf);
  }
  SECTION("zero map into a unit is neither") {
    DgFam zero(Q, {"*"}, {});
    DgFam y = DgFam::single("*", DgModule(GradedModule::unit_at(Q, 0, "y")));
    ClassReport rep = classify(inst, ChainFam::zero(zero, y));
    CHECK_FALSE(rep.in_w);
    CHECK_FALSE(rep.in_rf);
    CHECK(rep.homology.at("*").at(0) == std::array<int, 3>{0, 1, 0});
    CHECK(rep.surjectivity.at("*").at(0) == std::pair<int, int>{0, 1});
  }
  SECTION("map to the zero object is a fibration but no equivalence") {
    DgFam x = DgFam::single("*", DgModule(GradedModule::unit_at(Q, 0, "x")));
    DgFam zero(Q, {"*"}, {});
    ClassReport rep = classify(inst, ChainFam::zero(x, zero));
    CHECK_FALSE(rep.in_w);
    CHECK(rep.in_rf);
  }
  SECTION("quasi-isomorphism that is not surjective") {
    // Y = unit plus a contractible pair, X = the unit alone
    GradedModule y(Q, {{0, {"a", "b"}}, {1, {"c"}}});
    HomMap d(y, y, 1);
    d.set_block(0, Mat::from_ints(Q, {{0}, {1}}));
    DgModule ym(y, d);
    DgFam yf = DgFam::single("*", ym);
    DgFam xf = DgFam::single("*", DgModule(GradedModule::unit_at(Q, 0, "x")));
    HomMap j(xf.at("*").gm(), y, 0);
    j.set_block(0, Mat::from_ints(Q, {{1, 0}}));
    ChainFam inc(xf, yf, {{"*", ChainMap(xf.at("*"), ym, j)}});
    ClassReport rep = classify(inst, inc);
    CHECK(rep.in_w);
    CHECK_FALSE(rep.in_rf);
  }
  SECTION("surjective quasi-isomorphisms land in both classes") {
    SplitMix64 rng(203);
    for (int trial = 0; trial < 5; ++trial) {
      const Field f = trial % 2 ? Field::prime(5) : Q;
      ChainFam g = random_sq_fam(rng, f, inst.indices(), -1, 2);
      ClassReport rep = classify(inst, g);
      CHECK(rep.in_w);
      CHECK(rep.in_rf);
    }
  }
}

TEST_CASE("standard trivial cofibration") {
  IdentityInstance inst({"x", "y"});
  SplitMix64 rng(211);
  for (int trial = 0; trial < 6; ++trial) {
    const Field f = trial % 2 ? Field::prime(5) : Q;
    DgFam x = random_fam(rng, f, inst.indices(), -1, 2, 2, 1);
    DgFam n = free_fam(rng, f, inst.indices(), -1, 1, 2);
    StdTrivCof<IdentityInstance> stc = make_std_trivcof(inst, x, n);
    SECTION("witness is valid and the inclusion is an equivalence") {
      CHECK(witness_valid(inst, witness_of(stc)));
      CHECK(classify(inst, stc.jbar).in_w);
    }
    SECTION("underlying module adds a contractible cone on N") {
      DgFam uz = inst.U_ob(stc.z());
      for (const auto& s : inst.indices())
        for (int z = -4; z <= 4; ++z)
          CHECK(uz.at(s).rank(z) ==
                x.at(s).rank(z) + n.at(s).rank(z) + n.at(s).rank(z - 1));
    }
    SECTION("pack and unpack are mutually inverse") {
      DgFam b = random_fam(rng, f, inst.indices(), -1, 2, 2, 1);
      ChainFam c0 = random_cfam(rng, x, b);
      HomFam s2 = random_hfam(rng, shift_fam(n, -1), inst.U_ob(b), -1);
      ChainFam k = stc_pack(inst, stc, c0, s2);
      auto par = stc_unpack(inst, stc, k);
      CHECK(par.c0 == c0);
      CHECK((par.s2 - s2).is_zero());
      ChainFam k2 = random_cfam(rng, stc.z(), b);
      auto par2 = stc_unpack(inst, stc, k2);
      CHECK(stc_pack(inst, stc, par2.c0, par2.s2) == k2);
    }
  }
}

TEST_CASE("factorization as trivial cofibration then fibration") {
  IdentityInstance inst({"*"});
  SECTION("zero object into the unit") {
    DgFam zero(Q, {"*"}, {});
    DgFam y = DgFam::single("*", DgModule(GradedModule::unit_at(Q, 0, "y")));
    auto fac = factor_trivcof_fib(inst, ChainFam::zero(zero, y), zero, y);
    const DgModule& z = fac.stc.z().at("*");
    CHECK(z.rank(0) == 1);
    CHECK(z.rank(1) == 1);
    CHECK(z.gm().total_dim() == 2);
    CHECK(z.d().entry(0, 0, 0) == Scalar::one(Q));
    CHECK(fac.p.at("*").block(0) == Mat::from_ints(Q, {{1}}));
    CHECK(fac.jbar_report.in_w);
    CHECK(fac.p_report.in_rf);
    CHECK_FALSE(fac.p_report.in_w);  // the middle object is contractible
  }
  SECTION("random morphisms") {
    IdentityInstance inst2({"x", "y"});
    SplitMix64 rng(223);
    for (int trial = 0; trial < 6; ++trial) {
      const Field f = trial % 2 ? Field::prime(5) : Q;
      DgFam x = random_fam(rng, f, inst2.indices(), -1, 2, 2, 1);
      DgFam y = random_fam(rng, f, inst2.indices(), -1, 2, 2, 1);
      ChainFam g = random_cfam(rng, x, y);
      auto fac = factor_trivcof_fib(inst2, g, x, y);
      CHECK(compose(fac.stc.jbar, fac.p) == g);
      CHECK(fac.jbar_report.in_w);
      CHECK(fac.p_report.in_rf);
      CHECK(witness_valid(inst2, witness_of(fac.stc)));
    }
  }
}

TEST_CASE("lift of a standard trivial cofibration against a fibration") {
  IdentityInstance inst({"x", "y"});
  SplitMix64 rng(227);
  SECTION("commuting squares get fillers") {
    for (int trial = 0; trial < 5; ++trial) {
      const Field f = trial % 2 ? Field::prime(5) : Q;
      DgFam x = random_fam(rng, f, inst.indices(), -1, 2, 2, 1);
      DgFam n = free_fam(rng, f, inst.indices(), -1, 1, 2);
      StdTrivCof<IdentityInstance> stc = make_std_trivcof(inst, x, n);
      ChainFam g = random_sq_fam(rng, f, inst.indices(), -1, 2);  // in particular a fibration
      ChainFam k = random_cfam(rng, stc.z(), g.src());
      ChainFam a = compose(stc.jbar, k);
      ChainFam b = compose(k, g);
      ChainFam c = lift_standard_trivcof_vs_fib(inst, stc, g, a, b);
      CHECK(compose(stc.jbar, c) == a);
      CHECK(compose(c, g) == b);
    }
  }
  SECTION("non-commuting squares are rejected") {
    DgFam x = on_all(Q, inst.indices(), DgModule(GradedModule::unit_at(Q, 0, "x")));
    DgFam n = on_all(Q, inst.indices(), DgModule(GradedModule::unit_at(Q, 0, "n")));
    StdTrivCof<IdentityInstance> stc = make_std_trivcof(inst, x, n);
    ChainFam g = ChainFam::identity(stc.z());
    ChainFam a = ChainFam::zero(x, stc.z());
    ChainFam b = ChainFam::identity(stc.z());
    CHECK_FALSE(compose(stc.jbar, b) == compose(a, g));
    CHECK_THROWS_AS(lift_standard_trivcof_vs_fib(inst, stc, g, a, b), precondition_error);
  }
}

TEST_CASE("lift of a standard cofibration against a trivial fibration") {
  IdentityInstance inst({"x", "y"});
  SplitMix64 rng(229);
  for (int trial = 0; trial < 5; ++trial) {
    const Field f = trial % 2 ? Field::prime(5) : Q;
    DgFam x = random_fam(rng, f, inst.indices(), -1, 2, 2, 1);
    DgFam n = free_fam(rng, f, inst.indices(), -1, 1, 2);
    StdTrivCof<IdentityInstance> stc = make_std_trivcof(inst, x, n);
    CofibrationWitness<IdentityInstance> wit = witness_of(stc);
    ChainFam y = random_sq_fam(rng, f, inst.indices(), -1, 2);
    ChainFam k = random_cfam(rng, stc.z(), y.src());
    ChainFam u = compose(wit.composite, k);
    ChainFam v = compose(k, y);
    ChainFam w = lift_standard_cof_vs_trivfib(inst, wit, y, u, v);
    CHECK(compose(wit.composite, w) == u);
    CHECK(compose(w, y) == v);
  }
}

TEST_CASE("factorization as cofibration then trivial fibration") {
  IdentityInstance inst({"*"});
  SECTION("zero object into the unit stops after one stage") {
    DgFam zero(Q, {"*"}, {});
    DgFam y = DgFam::single("*", DgModule(GradedModule::unit_at(Q, 0, "y")));
    auto fac = factor_cof_trivfib(inst, ChainFam::zero(zero, y), zero, y, 4);
    CHECK(fac.stages_used == 1);
    CHECK(fac.early_stop);
    CHECK_FALSE(fac.stages_exhausted);
    CHECK(fac.p_report.in_w_rf());
    CHECK(fac.witness.steps.size() == 1);
    CHECK(compose(fac.witness.composite, fac.p) == ChainFam::zero(zero, y));
    CHECK(fac.q_epi == std::vector<bool>{false, true});
    CHECK(fac.cycles_die == std::vector<bool>{true});
    CHECK(fac.connecting_zero == std::vector<bool>{true});
  }
  SECTION("identity stops immediately") {
    SplitMix64 rng(233);
    DgFam a = DgFam::single("*", random_dg(rng, Q, -1, 2, 2, 1));
    ChainFam id = ChainFam::identity(a);
    auto fac = factor_cof_trivfib(inst, id, a, a, 4);
    CHECK(fac.stages_used == 0);
    CHECK(fac.early_stop);
    CHECK(fac.witness.steps.empty());
    CHECK(fac.witness.composite == id);
    CHECK(fac.p == id);
  }
  SECTION("unit onto the zero object") {
    DgFam x = DgFam::single("*", DgModule(GradedModule::unit_at(Q, 0, "x")));
    DgFam zero(Q, {"*"}, {});
    auto fac = factor_cof_trivfib(inst, ChainFam::zero(x, zero), x, zero, 4);
    CHECK(fac.p_report.in_w_rf());
    CHECK_FALSE(fac.stages_exhausted);
    CHECK(compose(fac.witness.composite, fac.p) == ChainFam::zero(x, zero));
    // the added generator bounds the unit, making the middle object acyclic
    const DgModule& d1 = fac.witness.steps.front().ud.at("*");
    CHECK(d1.rank(-1) == 1);
    CHECK(d1.rank(0) == 1);
  }
  SECTION("random morphisms") {
    IdentityInstance inst2({"x", "y"});
    SplitMix64 rng(239);
    int converged = 0;
    for (int trial = 0; trial < 6; ++trial) {
      const Field f = trial % 2 ? Field::prime(5) : Q;
      DgFam x = random_fam(rng, f, inst2.indices(), -1, 1, 2, 1);
      DgFam y = random_fam(rng, f, inst2.indices(), -1, 1, 2, 1);
      ChainFam g = random_cfam(rng, x, y);
      auto fac = factor_cof_trivfib(inst2, g, x, y, 4);
      if (!fac.witness.steps.empty()) {
        CHECK(witness_valid(inst2, fac.witness));
        CHECK(compose(fac.witness.composite, fac.p) == g);
      } else {
        CHECK(fac.p == g);
      }
      for (bool b : fac.cycles_die) CHECK(b);
      for (bool b : fac.connecting_zero) CHECK(b);
      // the first stage reaches every cycle, the second everything: q_2 on are epi
      for (size_t i = 2; i < fac.q_epi.size(); ++i) CHECK(fac.q_epi[i]);
      if (!fac.stages_exhausted) {
        CHECK(fac.p_report.in_w_rf());
        ++converged;
      }
    }
    CHECK(converged >= 1);
  }
}

TEST_CASE("retract presentation of weak equivalences") {
  IdentityInstance inst({"x", "y"});
  SplitMix64 rng(241);
  SECTION("standard trivial cofibrations retract through their factorization") {
    for (int trial = 0; trial < 4; ++trial) {
      const Field f = trial % 2 ? Field::prime(5) : Q;
      DgFam x = random_fam(rng, f, inst.indices(), -1, 2, 2, 1);
      DgFam n = free_fam(rng, f, inst.indices(), -1, 1, 2);
      StdTrivCof<IdentityInstance> stc = make_std_trivcof(inst, x, n);
      CofibrationWitness<IdentityInstance> wit = witness_of(stc);
      auto ret = retract_presentation(inst, stc.jbar, x, stc.z(), &wit, nullptr);
      CHECK(compose(stc.jbar, ret.w) == ret.factorization.stc.jbar);
      CHECK(compose(ret.w, ret.factorization.p) == ChainFam::identity(stc.z()));
    }
  }
  SECTION("isomorphisms via a supplied filler") {
    for (int trial = 0; trial < 4; ++trial) {
      DgFam x = random_fam(rng, Q, inst.indices(), -1, 2, 2, 1);
      ChainFam f = random_iso_from(rng, x);
      auto fac = factor_trivcof_fib(inst, f, x, f.tgt());
      ChainFam w = compose(invert(f), fac.stc.jbar);
      auto ret = retract_presentation<IdentityInstance>(inst, f, x, f.tgt(), nullptr, &w);
      CHECK(compose(f, ret.w) == ret.factorization.stc.jbar);
      CHECK(compose(ret.w, ret.factorization.p) == ChainFam::identity(f.tgt()));
    }
  }
  SECTION("non-equivalences are rejected") {
    DgFam x = on_all(Q, inst.indices(), DgModule(GradedModule::unit_at(Q, 0, "x")));
    DgFam zero(Q, inst.indices(), {});
    CHECK_THROWS_AS(
        retract_presentation<IdentityInstance>(inst, ChainFam::zero(x, zero), x, zero, nullptr,
                                               nullptr),
        precondition_error);
  }
}

TEST_CASE("two of three for weak equivalences") {
  IdentityInstance inst({"x", "y"});
  SplitMix64 rng(251);
  for (int trial = 0; trial < 6; ++trial) {
    DgFam a = random_fam(rng, Q, inst.indices(), -1, 2, 2, 1);
    DgFam b = random_fam(rng, Q, inst.indices(), -1, 2, 2, 1);
    ChainFam f = random_cfam(rng, a, b);
    ChainFam g = random_qiso_from(rng, b);  // b -> b'
    ChainFam h = random_iso_from(rng, a);   // a -> a'
    CHECK(classify(inst, g).in_w);
    CHECK(classify(inst, h).in_w);
    // post- and pre-composition with an equivalence preserves the class of f
    CHECK(classify(inst, compose(f, g)).in_w == classify(inst, f).in_w);
    ChainFam hf = compose(invert(h), f);  // a' -> b along the inverse equivalence
    CHECK(classify(inst, hf).in_w == classify(inst, f).in_w);
    // two equivalences compose to an equivalence
    ChainFam gg = random_qiso_from(rng, g.tgt());
    CHECK(classify(inst, compose(g, gg)).in_w);
  }
}
