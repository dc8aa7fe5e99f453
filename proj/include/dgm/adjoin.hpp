#ifndef DGM_ADJOIN_HPP
#define DGM_ADJOIN_HPP

#include "adjunction.hpp"

namespace dgm {

struct membership_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A<M,alpha> together with its universal pair (jbar, theta) and the data
/// needed to mediate out of the defining pushout.
template <class Inst>
struct AdjoinResult {
  typename Inst::Obj a;
  typename Inst::Obj d;
  typename Inst::Mor jbar;  // A -> D
  typename Inst::Mor g;     // F C -> D
  DgFam m;
  ChainFam alpha;  // M -> U A
  ConeFam c;       // Cone alpha with N = U A
  HomFam theta;    // M -> U D, degree -1
  DgFam ud;
  ChainFam ujbar;  // U A -> U D
  typename Inst::Pushed pushed;
};

/// Element of h_{A,alpha}(B): a morphism f: A -> B with a degree -1
/// homotopy t: M -> U B subject to (t)d = alpha·(U f).
template <class Inst>
struct HPair {
  typename Inst::Mor f;
  HomFam t;
};

template <class Inst>
bool hpair_valid(const Inst& inst, const AdjoinResult<Inst>& res, const HPair<Inst>& pair) {
  return map_boundary(pair.t) == to_hom(compose(res.alpha, inst.U_mor(pair.f)));
}

/// Joint map out of a cone from its two summand components (top: M[1] -> T,
/// bot: N -> T, equal degrees).
inline HomFam cone_case(const ConeFam& c, const HomFam& top, const HomFam& bot) {
  if (top.deg() != bot.deg()) throw field_error("cone_case: degree mismatch");
  std::map<std::string, HomMap> at;
  for (const auto& s : c.cone.indices()) {
    const GradedModule& cg = c.cone.at(s).gm();
    HomMap h(cg, top.tgt().at(s).gm(), top.deg());
    for (const auto& [z, b] : cg.degrees()) {
      int cols = top.tgt().at(s).rank(z + top.deg());
      if (cols == 0) continue;
      Mat m = top.at(s).block(z).vstack(bot.at(s).block(z));
      h.set_block(z, m);
    }
    at.emplace(s, h);
  }
  return HomFam(c.cone, top.tgt(), top.deg(), std::move(at));
}

template <class Inst>
AdjoinResult<Inst> adjoin(const Inst& inst, const typename Inst::Obj& a, const ChainFam& alpha) {
  DgFam ua = inst.U_ob(a);
  if (alpha.tgt() != ua) throw precondition_error("adjoin: alpha must land in U A");
  ConeFam c = cone_fam(alpha);
  auto pushed = inst.adjoin_pushout(a, c, alpha);
  DgFam ud = inst.U_ob(pushed.d);
  ChainFam ujbar = inst.U_mor(pushed.jbar);
  // transpose of g: C -> U D, taken through the instance so that U(F C)
  // never needs to be materialized
  ChainFam tg = inst.transpose_mor(c.cone, pushed.g);
  HomFam theta = compose(compose(sigma_fam(alpha.src(), 1), c.inj1), to_hom(tg));
  AdjoinResult<Inst> res{a,     pushed.d, pushed.jbar, pushed.g, alpha.src(), alpha,
                         c,     theta,    ud,          ujbar,    pushed};
  if (map_boundary(res.theta) != to_hom(compose(alpha, ujbar)))
    throw field_error("adjoin: (theta)d != alpha·U(jbar)");
  return res;
}

/// The representing direction: a morphism k out of D gives the pair
/// (jbar·k, theta·U k).
template <class Inst>
HPair<Inst> psi(const Inst& inst, const AdjoinResult<Inst>& res, const typename Inst::Mor& k) {
  HPair<Inst> pair{inst.compose_mor(res.jbar, k), compose(res.theta, inst.U_mor(k))};
  if (!hpair_valid(inst, res, pair)) throw membership_error("psi: produced pair fails membership");
  return pair;
}

/// The inverse direction: a valid pair (f, t) determines the chain map
/// x = (sigma^{-1} t; U f): C -> U B and then the pushout-mediated k.
template <class Inst>
typename Inst::Mor psi_inverse(const Inst& inst, const AdjoinResult<Inst>& res,
                               const HPair<Inst>& pair) {
  if (!hpair_valid(inst, res, pair)) throw membership_error("psi_inverse: (t)d != alpha·U f");
  HomFam top = compose(sigma_inverse_fam(res.m, 1), pair.t);
  HomFam bot = to_hom(inst.U_mor(pair.f));
  ChainFam x = as_chain(cone_case(res.c, top, bot));
  typename Inst::Mor u = inst.cotranspose(x, inst.mor_target(pair.f));
  typename Inst::Mor k = inst.adjoin_mediator(res.pushed, u, pair.f);
  HPair<Inst> back = psi(inst, res, k);
  if (!inst.mor_equal(back.f, pair.f) || back.t != pair.t)
    throw field_error("psi_inverse: round trip failed");
  return k;
}

/// Homotopic attaching maps give isomorphic adjoins: k with jbar·k = jbar'
/// built from the bijection (f, t) -> (f, t - h·U f) and its inverse.
template <class Inst>
typename Inst::Mor transfer_along_homotopy(const Inst& inst, const AdjoinResult<Inst>& res,
                                           const AdjoinResult<Inst>& res2, const HomFam& h) {
  if (map_boundary(h) != to_hom(res.alpha) - to_hom(res2.alpha))
    throw membership_error("transfer: (h)d != alpha - alpha'");
  // (jbar', theta' + h·U jbar') lies in h_{A,alpha}(D')
  HPair<Inst> fwd{res2.jbar, res2.theta + compose(h, res2.ujbar)};
  typename Inst::Mor k = psi_inverse(inst, res, fwd);
  HPair<Inst> bwd{res.jbar, res.theta - compose(h, res.ujbar)};
  typename Inst::Mor kinv = psi_inverse(inst, res2, bwd);
  if (!inst.mor_equal(inst.compose_mor(k, kinv), inst.identity_mor(res.d)) ||
      !inst.mor_equal(inst.compose_mor(kinv, k), inst.identity_mor(res2.d)))
    throw field_error("transfer: k is not an isomorphism");
  return k;
}

/// A<beta>: A<M', beta·alpha''> -> A<M'', alpha''> for beta: M' -> M''.
template <class Inst>
typename Inst::Mor induced_map(const Inst& inst, const ChainFam& beta,
                               const AdjoinResult<Inst>& res1, const AdjoinResult<Inst>& res2) {
  if (compose(beta, res2.alpha) != res1.alpha)
    throw precondition_error("induced_map: alpha' != beta·alpha''");
  HPair<Inst> pair{res2.jbar, compose(to_hom(beta), res2.theta)};
  typename Inst::Mor k = psi_inverse(inst, res1, pair);
  // trapezoids (re-stated from the round trip): jbar'' = jbar'·k and
  // beta·theta'' = theta'·U k
  if (!inst.mor_equal(inst.compose_mor(res1.jbar, k), res2.jbar) ||
      compose(to_hom(beta), res2.theta) != compose(res1.theta, inst.U_mor(k)))
    throw field_error("induced_map: trapezoid identities failed");
  return k;
}

/// One cycle-killing stage for r: A -> Y: adjoin the cycles of
/// Cone(U r [-1]) along their first components, then map down to Y.
template <class Inst>
struct CycleKillerStage {
  DgFam n;                   // free module of cone cycles, zero differential
  ChainFam pr1;              // N -> U A (the attaching map)
  HomFam t;                  // N -> U Y, degree -1
  AdjoinResult<Inst> stage;  // D = A<N, pr1>
  typename Inst::Mor q;      // D -> Y with jbar·q = r
  bool cycles_die = false;   // every cone cycle maps to a boundary downstream
};

template <class Inst>
CycleKillerStage<Inst> cycle_killer_stage(const Inst& inst, const typename Inst::Obj& a,
                                          const typename Inst::Obj& y,
                                          const typename Inst::Mor& r) {
  ChainFam ur = inst.U_mor(r);
  const DgFam& ua = ur.src();
  const DgFam& uy = ur.tgt();
  const Field& f = ua.field();
  ChainFam shifted = shift_fam(ur, -1);

  std::map<std::string, DgModule> nmod;
  std::map<std::string, HomMap> pr1at, tat;
  std::map<std::string, ConeBundle> cones;
  for (const auto& s : ua.indices()) {
    ConeBundle cb = cone(shifted.at(s));
    if (cb.m1.gm() != ua.at(s).gm())
      throw field_error("cycle_killer: shift round trip failed");
    cones.emplace(s, cb);
    std::map<int, std::vector<std::string>> basis;
    std::map<int, Mat> cyc;
    for (const auto& [z, b] : cb.cone.gm().degrees()) {
      Mat k = kernel_basis(cb.cone.d().block(z));
      if (k.rows() == 0) continue;
      std::vector<std::string> lab;
      for (int i = 0; i < k.rows(); ++i)
        lab.push_back("z" + std::to_string(z) + "_" + std::to_string(i));
      basis[z] = std::move(lab);
      cyc[z] = std::move(k);
    }
    GradedModule ng(f, basis);
    DgModule nm(ng);  // zero differential: every element is a cycle
    HomMap p1(ng, ua.at(s).gm(), 0);
    HomMap p2(ng, uy.at(s).gm(), -1);
    for (auto& [z, k] : cyc) {
      int r1 = cb.m1.rank(z);
      int r2 = cb.cone.rank(z) - r1;
      Mat m1part(f, k.rows(), r1), ypart(f, k.rows(), r2);
      for (int i = 0; i < k.rows(); ++i) {
        for (int j = 0; j < r1; ++j) m1part.at(i, j) = k.at(i, j);
        for (int j = 0; j < r2; ++j) ypart.at(i, j) = k.at(i, r1 + j);
      }
      if (r1) p1.set_block(z, m1part);
      // the second cone coordinate lives in (U Y)[-1]^z = (U Y)^{z-1}
      if (r2) p2.set_block(z, ypart);
    }
    nmod.emplace(s, nm);
    pr1at.emplace(s, std::move(p1));
    tat.emplace(s, std::move(p2));
  }
  DgFam n(f, ua.indices(), std::move(nmod));
  ChainFam pr1 = as_chain(HomFam(n, ua, 0, std::move(pr1at)));
  HomFam t(n, uy, -1, std::move(tat));

  AdjoinResult<Inst> stage = adjoin(inst, a, pr1);
  typename Inst::Mor q = psi_inverse(inst, stage, HPair<Inst>{r, t});

  // certificate: gamma = Cone(U jbar [-1], 1) sends every cycle of
  // Cone(U r [-1]) to the boundary of the explicit witness (theta-image, 0)
  ChainFam uq = inst.U_mor(q);
  ChainFam jshift = shift_fam(stage.ujbar, -1);
  bool ok = true;
  for (const auto& s : ua.indices()) {
    const ConeBundle& c1 = cones.at(s);
    ConeBundle c2 = cone(shift_fam(uq, -1).at(s));
    ChainMap gamma =
        cone_map(c1, c2, jshift.at(s), ChainMap::identity(shift_fam(uy, -1).at(s)));
    for (const auto& [z, b] : n.at(s).gm().degrees()) {
      Mat cyc(f, n.at(s).rank(z), c1.cone.rank(z));
      // reconstruct the ambient cycle rows from pr1/t blocks
      int r1 = c1.m1.rank(z);
      Mat p1b = pr1.at(s).hom().block(z);
      Mat p2b = t.at(s).block(z);
      for (int i = 0; i < cyc.rows(); ++i) {
        for (int j = 0; j < r1; ++j) cyc.at(i, j) = p1b.at(i, j);
        for (int j = 0; j < cyc.cols() - r1; ++j) cyc.at(i, r1 + j) = p2b.at(i, j);
      }
      Mat img(f, cyc.rows(), c2.cone.rank(z));
      for (int i = 0; i < cyc.rows(); ++i) {
        auto v = row_times(cyc.row(i), gamma.block(z));
        for (int j = 0; j < img.cols(); ++j) img.at(i, j) = v[j];
      }
      // witness rows: (theta-image, 0) in Cone(U q [-1])^{z-1}
      Mat th = stage.theta.at(s).block(z);  // N^z -> (U D)^{z-1}
      for (int i = 0; i < cyc.rows(); ++i) {
        std::vector<Scalar> w(c2.cone.rank(z - 1), Scalar::zero(f));
        int w1 = c2.m1.rank(z - 1);
        for (int j = 0; j < w1; ++j) w[j] = th.at(i, j);
        auto bd = row_times(w, c2.cone.d().block(z - 1));
        for (int j = 0; j < img.cols(); ++j)
          if (bd[j] != img.at(i, j)) ok = false;
      }
    }
  }
  return CycleKillerStage<Inst>{n, pr1, t, stage, q, ok};
}

}  // namespace dgm

#endif
