#ifndef DGM_FAMILY_HPP
#define DGM_FAMILY_HPP

#include <vector>

#include "dg.hpp"

namespace dgm {

/// Object of dg^S: a finite index set with a dg-module at each index.
/// Index order is part of the value (determinism of all derived bases).
class DgFam {
 public:
  DgFam() = default;

  DgFam(const Field& f, std::vector<std::string> indices, std::map<std::string, DgModule> at)
      : field_(f), idx_(std::move(indices)), at_(std::move(at)) {
    for (const auto& s : idx_) {
      auto it = at_.find(s);
      if (it == at_.end()) at_.emplace(s, DgModule(GradedModule(f)));
    }
    if (at_.size() != idx_.size()) throw field_error("family: stray components");
    for (const auto& [s, m] : at_)
      if (m.field() != field_) throw field_error("family: field mismatch");
  }

  static DgFam single(const std::string& index, const DgModule& m) {
    return DgFam(m.field(), {index}, {{index, m}});
  }

  const Field& field() const { return field_; }
  const std::vector<std::string>& indices() const { return idx_; }
  const DgModule& at(const std::string& s) const {
    auto it = at_.find(s);
    if (it == at_.end()) throw field_error("family: unknown index " + s);
    return it->second;
  }
  bool trivial() const {
    for (const auto& [s, m] : at_)
      if (!m.trivial()) return false;
    return true;
  }
  int total_dim() const {
    int n = 0;
    for (const auto& [s, m] : at_) n += m.gm().total_dim();
    return n;
  }

  friend bool operator==(const DgFam& a, const DgFam& b) {
    return a.idx_ == b.idx_ && a.at_ == b.at_;
  }
  friend bool operator!=(const DgFam& a, const DgFam& b) { return !(a == b); }

 private:
  Field field_{};
  std::vector<std::string> idx_;
  std::map<std::string, DgModule> at_;
};

/// Morphism of dg^S: componentwise chain maps.
class ChainFam {
 public:
  ChainFam() = default;

  ChainFam(DgFam src, DgFam tgt, std::map<std::string, ChainMap> at)
      : src_(std::move(src)), tgt_(std::move(tgt)), at_(std::move(at)) {
    if (src_.indices() != tgt_.indices()) throw field_error("family map: index sets differ");
    for (const auto& s : src_.indices()) {
      auto it = at_.find(s);
      if (it == at_.end())
        at_.emplace(s, ChainMap::zero(src_.at(s), tgt_.at(s)));
      else if (it->second.src() != src_.at(s) || it->second.tgt() != tgt_.at(s))
        throw field_error("family map: component type mismatch at " + s);
    }
  }

  static ChainFam identity(const DgFam& m) {
    std::map<std::string, ChainMap> at;
    for (const auto& s : m.indices()) at.emplace(s, ChainMap::identity(m.at(s)));
    return ChainFam(m, m, std::move(at));
  }
  static ChainFam zero(const DgFam& s, const DgFam& t) { return ChainFam(s, t, {}); }

  const DgFam& src() const { return src_; }
  const DgFam& tgt() const { return tgt_; }
  const ChainMap& at(const std::string& s) const {
    auto it = at_.find(s);
    if (it == at_.end()) throw field_error("family map: unknown index " + s);
    return it->second;
  }

  friend bool operator==(const ChainFam& a, const ChainFam& b) {
    return a.src_ == b.src_ && a.tgt_ == b.tgt_ && a.at_ == b.at_;
  }
  friend bool operator!=(const ChainFam& a, const ChainFam& b) { return !(a == b); }

 private:
  DgFam src_, tgt_;
  std::map<std::string, ChainMap> at_;
};

/// Homogeneous (not necessarily chain) family map of a fixed degree;
/// carries homotopies t, h, θ.
class HomFam {
 public:
  HomFam() = default;

  HomFam(DgFam src, DgFam tgt, int deg, std::map<std::string, HomMap> at = {})
      : src_(std::move(src)), tgt_(std::move(tgt)), deg_(deg), at_(std::move(at)) {
    if (src_.indices() != tgt_.indices()) throw field_error("family hom: index sets differ");
    for (const auto& s : src_.indices()) {
      auto it = at_.find(s);
      if (it == at_.end())
        at_.emplace(s, HomMap(src_.at(s).gm(), tgt_.at(s).gm(), deg_));
      else if (it->second.src() != src_.at(s).gm() || it->second.tgt() != tgt_.at(s).gm() ||
               it->second.deg() != deg_)
        throw field_error("family hom: component mismatch at " + s);
    }
  }

  const DgFam& src() const { return src_; }
  const DgFam& tgt() const { return tgt_; }
  int deg() const { return deg_; }
  const HomMap& at(const std::string& s) const { return at_.at(s); }

  void set(const std::string& s, const HomMap& h) {
    auto it = at_.find(s);
    if (it == at_.end()) throw field_error("family hom: unknown index " + s);
    if (h.src() != it->second.src() || h.tgt() != it->second.tgt() || h.deg() != deg_)
      throw field_error("family hom: component mismatch at " + s);
    it->second = h;
  }

  bool is_zero() const {
    for (const auto& [s, h] : at_)
      if (!h.is_zero()) return false;
    return true;
  }

  HomFam operator+(const HomFam& o) const {
    HomFam r = *this;
    for (auto& [s, h] : r.at_) h = h + o.at(s);
    return r;
  }
  HomFam operator-(const HomFam& o) const {
    HomFam r = *this;
    for (auto& [s, h] : r.at_) h = h - o.at(s);
    return r;
  }

  friend bool operator==(const HomFam& a, const HomFam& b) {
    return a.src_ == b.src_ && a.tgt_ == b.tgt_ && a.deg_ == b.deg_ && a.at_ == b.at_;
  }
  friend bool operator!=(const HomFam& a, const HomFam& b) { return !(a == b); }

 private:
  DgFam src_, tgt_;
  int deg_ = 0;
  std::map<std::string, HomMap> at_;
};

/// The differential of a family as a degree +1 HomFam (for composition).
inline HomFam d_fam(const DgFam& m) {
  std::map<std::string, HomMap> at;
  for (const auto& s : m.indices()) at.emplace(s, m.at(s).d());
  return HomFam(m, m, 1, std::move(at));
}

inline HomFam to_hom(const ChainFam& f) {
  std::map<std::string, HomMap> at;
  for (const auto& s : f.src().indices()) at.emplace(s, f.at(s).hom());
  return HomFam(f.src(), f.tgt(), 0, std::move(at));
}

inline ChainFam compose(const ChainFam& f, const ChainFam& g) {
  std::map<std::string, ChainMap> at;
  for (const auto& s : f.src().indices()) at.emplace(s, compose(f.at(s), g.at(s)));
  return ChainFam(f.src(), g.tgt(), std::move(at));
}

inline HomFam compose(const HomFam& f, const HomFam& g) {
  std::map<std::string, HomMap> at;
  for (const auto& s : f.src().indices()) at.emplace(s, compose(f.at(s), g.at(s)));
  return HomFam(f.src(), g.tgt(), f.deg() + g.deg(), std::move(at));
}

inline HomFam compose(const ChainFam& f, const HomFam& g) { return compose(to_hom(f), g); }
inline HomFam compose(const HomFam& f, const ChainFam& g) { return compose(f, to_hom(g)); }

inline DgFam shift_fam(const DgFam& m, int a) {
  std::map<std::string, DgModule> at;
  for (const auto& s : m.indices()) at.emplace(s, shift_dg(m.at(s), a));
  return DgFam(m.field(), m.indices(), std::move(at));
}

inline ChainFam shift_fam(const ChainFam& f, int a) {
  std::map<std::string, ChainMap> at;
  for (const auto& s : f.src().indices()) at.emplace(s, shift_chain(f.at(s), a));
  return ChainFam(shift_fam(f.src(), a), shift_fam(f.tgt(), a), std::move(at));
}

/// σ^a as a family map M → M[a] of degree -a.
inline HomFam sigma_fam(const DgFam& m, int a) {
  std::map<std::string, HomMap> at;
  for (const auto& s : m.indices()) at.emplace(s, sigma(m.at(s).gm(), a));
  return HomFam(m, shift_fam(m, a), -a, std::move(at));
}

inline HomFam sigma_inverse_fam(const DgFam& m, int a) {
  std::map<std::string, HomMap> at;
  for (const auto& s : m.indices()) at.emplace(s, sigma_inverse(m.at(s).gm(), a));
  return HomFam(shift_fam(m, a), m, a, std::move(at));
}

inline HomFam map_boundary(const HomFam& f) {
  std::map<std::string, HomMap> at;
  for (const auto& s : f.src().indices())
    at.emplace(s, map_boundary(f.src().at(s), f.tgt().at(s), f.at(s)));
  return HomFam(f.src(), f.tgt(), f.deg() + 1, std::move(at));
}

/// Promote a degree-0 family hom whose boundary vanishes to a ChainFam.
inline ChainFam as_chain(const HomFam& f) {
  if (f.deg() != 0) throw field_error("as_chain: degree must be 0");
  std::map<std::string, ChainMap> at;
  for (const auto& s : f.src().indices())
    at.emplace(s, ChainMap(f.src().at(s), f.tgt().at(s), f.at(s)));
  return ChainFam(f.src(), f.tgt(), std::move(at));
}

inline bool is_quasi_iso(const ChainFam& f) {
  for (const auto& s : f.src().indices())
    if (!is_quasi_iso(f.at(s))) return false;
  return true;
}

inline bool is_epi(const ChainFam& f) {
  for (const auto& s : f.src().indices())
    if (!is_epi(f.at(s))) return false;
  return true;
}

inline bool is_iso(const ChainFam& f) {
  for (const auto& s : f.src().indices())
    if (!is_iso(f.at(s))) return false;
  return true;
}

inline ChainFam invert(const ChainFam& f) {
  std::map<std::string, ChainMap> at;
  for (const auto& s : f.src().indices()) at.emplace(s, invert(f.at(s)));
  return ChainFam(f.tgt(), f.src(), std::move(at));
}

struct ConeFam {
  DgFam cone;
  DgFam m1;
  ChainFam inj2;
  ChainFam proj;
  HomFam inj1;
  ChainFam alpha;
};

inline ConeFam cone_fam(const ChainFam& alpha) {
  std::map<std::string, DgModule> c, m1;
  std::map<std::string, ChainMap> inj2, proj;
  std::map<std::string, HomMap> inj1;
  for (const auto& s : alpha.src().indices()) {
    ConeBundle b = cone(alpha.at(s));
    c.emplace(s, b.cone);
    m1.emplace(s, b.m1);
    inj2.emplace(s, b.inj2);
    proj.emplace(s, b.proj);
    inj1.emplace(s, b.inj1);
  }
  const auto& idx = alpha.src().indices();
  const Field& f = alpha.src().field();
  DgFam cf(f, idx, std::move(c));
  DgFam m1f(f, idx, std::move(m1));
  return ConeFam{cf,
                 m1f,
                 ChainFam(alpha.tgt(), cf, std::move(inj2)),
                 ChainFam(cf, m1f, std::move(proj)),
                 HomFam(m1f, cf, 0, std::move(inj1)),
                 alpha};
}

inline std::optional<HomFam> find_homotopy(const ChainFam& f, const ChainFam& g) {
  std::map<std::string, HomMap> at;
  for (const auto& s : f.src().indices()) {
    auto h = find_homotopy(f.at(s), g.at(s));
    if (!h) return std::nullopt;
    at.emplace(s, *h);
  }
  return HomFam(f.src(), f.tgt(), -1, std::move(at));
}

struct DirectSumFam {
  DgFam sum;
  ChainFam inj1, inj2, proj1, proj2;
};

inline DirectSumFam direct_sum_fam(const DgFam& a, const DgFam& b) {
  if (a.indices() != b.indices()) throw field_error("direct_sum_fam: index sets differ");
  std::map<std::string, DgModule> sum;
  std::map<std::string, ChainMap> i1, i2, p1, p2;
  for (const auto& s : a.indices()) {
    const DgModule& x = a.at(s);
    const DgModule& y = b.at(s);
    DirectSum ds = direct_sum(x.gm(), y.gm());
    HomMap d(ds.sum, ds.sum, 1);
    const Field& f = a.field();
    for (const auto& [z, bb] : ds.sum.degrees()) {
      int r1 = x.rank(z), r2 = y.rank(z), c1 = x.rank(z + 1), c2 = y.rank(z + 1);
      if (c1 + c2 == 0) continue;
      Mat m(f, r1 + r2, c1 + c2);
      Mat d1 = x.d().block(z), d2 = y.d().block(z);
      for (int i = 0; i < r1; ++i)
        for (int j = 0; j < c1; ++j) m.at(i, j) = d1.at(i, j);
      for (int i = 0; i < r2; ++i)
        for (int j = 0; j < c2; ++j) m.at(r1 + i, c1 + j) = d2.at(i, j);
      d.set_block(z, m);
    }
    DgModule xy(ds.sum, d);
    sum.emplace(s, xy);
    i1.emplace(s, ChainMap(x, xy, ds.inj1));
    i2.emplace(s, ChainMap(y, xy, ds.inj2));
    p1.emplace(s, ChainMap(xy, x, ds.proj1));
    p2.emplace(s, ChainMap(xy, y, ds.proj2));
  }
  DgFam sf(a.field(), a.indices(), std::move(sum));
  return DirectSumFam{sf, ChainFam(a, sf, std::move(i1)), ChainFam(b, sf, std::move(i2)),
                      ChainFam(sf, a, std::move(p1)), ChainFam(sf, b, std::move(p2))};
}

struct PushoutFam {
  DgFam object;
  ChainFam leg1, leg2;
  std::map<std::string, PushoutResult> parts;
};

inline PushoutFam pushout_fam(const ChainFam& phi, const ChainFam& psi) {
  std::map<std::string, DgModule> p;
  std::map<std::string, ChainMap> l1, l2;
  std::map<std::string, PushoutResult> parts;
  for (const auto& s : phi.src().indices()) {
    PushoutResult po = pushout(phi.at(s), psi.at(s));
    p.emplace(s, po.object);
    l1.emplace(s, po.leg1);
    l2.emplace(s, po.leg2);
    parts.emplace(s, std::move(po));
  }
  DgFam pf(phi.src().field(), phi.src().indices(), std::move(p));
  return PushoutFam{pf, ChainFam(phi.tgt(), pf, std::move(l1)),
                    ChainFam(psi.tgt(), pf, std::move(l2)), std::move(parts)};
}

inline ChainFam pushout_mediator(const PushoutFam& po, const ChainFam& b, const ChainFam& c) {
  std::map<std::string, ChainMap> at;
  for (const auto& s : po.object.indices())
    at.emplace(s, pushout_mediator(po.parts.at(s), b.at(s), c.at(s)));
  return ChainFam(po.object, b.tgt(), std::move(at));
}

/// The object with Cone(id of the unit) at one index and zero elsewhere,
/// shifted by p.
inline DgFam cone_unit_at(const Field& f, const std::vector<std::string>& indices,
                          const std::string& x, int p) {
  std::map<std::string, DgModule> at;
  DgModule u(GradedModule::unit_at(f, 0, "e"));
  DgModule k = cone(ChainMap::identity(u)).cone;
  at.emplace(x, shift_dg(k, p));
  return DgFam(f, indices, std::move(at));
}

}  // namespace dgm

#endif
