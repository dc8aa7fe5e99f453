#ifndef DGM_ADJUNCTION_HPP
#define DGM_ADJUNCTION_HPP

#include "family.hpp"

namespace dgm {

/// Quasi-isomorphism check restricted to a degree window (for instances
/// whose underlying-module computation is only exact inside a window).
inline bool is_quasi_iso_window(const ChainFam& f, int lo, int hi) {
  for (const auto& s : f.src().indices()) {
    const ChainMap& c = f.at(s);
    Homology hs(c.src()), ht(c.tgt());
    for (int z = lo; z <= hi; ++z) {
      int a = hs.dim(z), b = ht.dim(z);
      if (a != b) return false;
      if (a && rank(induced_on_homology(c, hs, ht, z)) != a) return false;
    }
  }
  return true;
}

/// The adjunction interface, duck-typed: an instance provides
///   Obj, Mor; F_ob, F_mor, U_ob, U_mor; unit; coproduct;
///   adjoin_pushout / adjoin_mediator (the one span shape the theory needs);
///   cotranspose; mor_equal; compose_mor / identity_mor.
/// The identity instance: C = dg^S, F = U = id.
class IdentityInstance {
 public:
  using Obj = DgFam;
  using Mor = ChainFam;

  explicit IdentityInstance(std::vector<std::string> indices = {"*"})
      : indices_(std::move(indices)) {}

  const std::vector<std::string>& indices() const { return indices_; }

  Obj F_ob(const DgFam& m) const { return m; }
  Mor F_mor(const ChainFam& f) const { return f; }
  DgFam U_ob(const Obj& a) const { return a; }
  ChainFam U_mor(const Mor& f) const { return f; }

  ChainFam unit(const DgFam& m) const { return ChainFam::identity(m); }
  Mor counit(const Obj& a) const { return ChainFam::identity(a); }

  Mor compose_mor(const Mor& f, const Mor& g) const { return compose(f, g); }
  Mor identity_mor(const Obj& a) const { return ChainFam::identity(a); }
  bool mor_equal(const Mor& f, const Mor& g) const { return f == g; }

  /// cotranspose of x: M -> U A is F x then counit; here just x itself.
  Mor cotranspose(const ChainFam& x) const { return x; }
  Mor cotranspose(const ChainFam& x, const Obj& /*target*/) const { return x; }

  const Obj& mor_target(const Mor& f) const { return f.tgt(); }

  /// transpose of l: F M -> A as a chain map M -> U A (unit then U l).
  ChainFam transpose_mor(const DgFam& m, const Mor& l) const {
    return compose(unit(m), U_mor(l));
  }

  struct Colimit {
    Obj obj;
    std::vector<Mor> legs;  // one per object of the chain, into the colimit
  };
  /// Colimit of a finite chain A_0 -> ... -> A_n: the last object with the
  /// composite legs.
  Colimit sequential_colimit(const std::vector<Mor>& chain) const {
    if (chain.empty()) throw precondition_error("sequential_colimit: empty chain");
    Colimit c{chain.back().tgt(), {}};
    c.legs.assign(chain.size() + 1, identity_mor(c.obj));
    for (size_t i = chain.size(); i-- > 0;) c.legs[i] = compose_mor(chain[i], c.legs[i + 1]);
    return c;
  }

  struct Coprod {
    Obj obj;
    Mor inj1, inj2;
  };
  Coprod coproduct(const Obj& a, const Obj& b) const {
    DirectSumFam ds = direct_sum_fam(a, b);
    return Coprod{ds.sum, ds.inj1, ds.inj2};
  }

  struct Pushed {
    Obj d;
    Mor jbar;  // A -> D
    Mor g;     // F C -> D
    PushoutFam po;
  };

  /// Pushout of F C <- F(U A) -> A along F(inj2) and the counit; in the
  /// identity instance this is the dg pushout of C <- A -> A, i.e. C.
  Pushed adjoin_pushout(const Obj& a, const ConeFam& c, const ChainFam& /*alpha*/) const {
    PushoutFam po = pushout_fam(c.inj2, ChainFam::identity(a));
    return Pushed{po.object, po.leg2, po.leg1, po};
  }

  /// Mediator for a cocone (u: F C -> B, f: A -> B) with F(inj2)·u = ε·f.
  Mor adjoin_mediator(const Pushed& p, const Mor& u, const Mor& f) const {
    return pushout_mediator(p.po, u, f);
  }

 private:
  std::vector<std::string> indices_;
};

/// transpose of l: F M -> A, generically unit then U l.
template <class Inst>
ChainFam transpose(const Inst& inst, const DgFam& m, const typename Inst::Mor& l) {
  return compose(inst.unit(m), inst.U_mor(l));
}

struct HypothesisCertificate {
  bool pass = true;
  std::string failing_index;
  int failing_degree = 0;
  // per index, per degree: homology dims of source and target of U(inj2)
  std::map<std::string, std::map<int, std::pair<int, int>>> dims;
};

/// Evidence that U(inj2): U A -> U(F(K_x[p]) ⊔ A) is a quasi-isomorphism
/// in the window, where K_x is the cone of the unit's identity at index x.
template <class Inst>
HypothesisCertificate verify_theorem_hypothesis(const Inst& inst, const typename Inst::Obj& a,
                                                const Field& f, const std::string& x, int p,
                                                int lo, int hi) {
  DgFam kx = cone_unit_at(f, inst.indices(), x, p);
  auto cp = inst.coproduct(inst.F_ob(kx), a);
  ChainFam u2 = inst.U_mor(cp.inj2);
  HypothesisCertificate cert;
  for (const auto& s : u2.src().indices()) {
    const ChainMap& c = u2.at(s);
    Homology hs(c.src()), ht(c.tgt());
    for (int z = lo; z <= hi; ++z) {
      cert.dims[s][z] = {hs.dim(z), ht.dim(z)};
      bool ok = hs.dim(z) == ht.dim(z) &&
                (hs.dim(z) == 0 || rank(induced_on_homology(c, hs, ht, z)) == hs.dim(z));
      if (!ok && cert.pass) {
        cert.pass = false;
        cert.failing_index = s;
        cert.failing_degree = z;
      }
    }
  }
  return cert;
}

}  // namespace dgm

#endif
