#ifndef DGM_DG_HPP
#define DGM_DG_HPP

#include <optional>

#include "graded.hpp"

namespace dgm {

struct precondition_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Differential graded module: degreewise free graded module with a square
/// zero differential of degree +1 (verified at construction).
class DgModule {
 public:
  DgModule() = default;

  explicit DgModule(const GradedModule& m) : gm_(m), d_(m, m, 1) {}

  DgModule(const GradedModule& m, const HomMap& d) : gm_(m), d_(d) {
    if (d.src() != m || d.tgt() != m || d.deg() != 1) throw field_error("differential shape mismatch");
    if (!compose(d, d).is_zero()) throw field_error("d^2 != 0");
  }

  const GradedModule& gm() const { return gm_; }
  const HomMap& d() const { return d_; }
  const Field& field() const { return gm_.field(); }
  int rank(int z) const { return gm_.rank(z); }
  bool trivial() const { return gm_.trivial(); }

  friend bool operator==(const DgModule& a, const DgModule& b) {
    return a.gm_ == b.gm_ && a.d_ == b.d_;
  }
  friend bool operator!=(const DgModule& a, const DgModule& b) { return !(a == b); }

 private:
  GradedModule gm_;
  HomMap d_;
};

inline DgModule shift_dg(const DgModule& m, int a) {
  return DgModule(shift_module(m.gm(), a), shift_map(m.d(), a));
}

/// Degree-0 map commuting with the differentials (checked at construction).
class ChainMap {
 public:
  ChainMap() = default;

  ChainMap(const DgModule& src, const DgModule& tgt, const HomMap& h) : src_(src), tgt_(tgt), h_(h) {
    if (h.src() != src.gm() || h.tgt() != tgt.gm() || h.deg() != 0)
      throw field_error("chain map shape mismatch");
    if (compose(h, tgt.d()) != compose(src.d(), h)) throw field_error("map does not commute with d");
  }

  static ChainMap identity(const DgModule& m) { return ChainMap(m, m, HomMap::identity(m.gm())); }
  static ChainMap zero(const DgModule& s, const DgModule& t) {
    return ChainMap(s, t, HomMap(s.gm(), t.gm(), 0));
  }

  const DgModule& src() const { return src_; }
  const DgModule& tgt() const { return tgt_; }
  const HomMap& hom() const { return h_; }
  Mat block(int z) const { return h_.block(z); }

  friend bool operator==(const ChainMap& a, const ChainMap& b) {
    return a.src_ == b.src_ && a.tgt_ == b.tgt_ && a.h_ == b.h_;
  }
  friend bool operator!=(const ChainMap& a, const ChainMap& b) { return !(a == b); }

 private:
  DgModule src_, tgt_;
  HomMap h_;
};

inline ChainMap compose(const ChainMap& f, const ChainMap& g) {
  if (f.tgt() != g.src()) throw field_error("chain composition type mismatch");
  return ChainMap(f.src(), g.tgt(), compose(f.hom(), g.hom()));
}

inline ChainMap shift_chain(const ChainMap& f, int a) {
  return ChainMap(shift_dg(f.src(), a), shift_dg(f.tgt(), a), shift_map(f.hom(), a));
}

/// The boundary (f)d = f.d - (-1)^{deg f} d.f of a homogeneous map between
/// dg-modules (left-to-right composition); for degree -1 this is fd + df.
inline HomMap map_boundary(const DgModule& src, const DgModule& tgt, const HomMap& f) {
  if (f.src() != src.gm() || f.tgt() != tgt.gm()) throw field_error("map_boundary shape mismatch");
  HomMap a = compose(f, tgt.d());
  HomMap b = compose(src.d(), f);
  return sign_pow(f.deg()) == 1 ? a - b : a + b;
}

// ---------------------------------------------------------------------------
// Cones

/// Cone alpha = (M[1] ⊕ N, d) with the upper-triangular differential
///   ( -σ^{-1} d_M σ   σ^{-1} α )
///   (       0            d_N  )
struct ConeBundle {
  DgModule cone;
  DgModule m1;      // M[1] with its shifted differential
  ChainMap inj2;    // N -> C, chain
  ChainMap proj;    // C -> M[1], chain
  HomMap inj1;      // M[1] -> C, degree 0 (not chain unless alpha = 0)
  ChainMap alpha;   // the originating map M -> N
};

inline ConeBundle cone(const ChainMap& alpha) {
  const DgModule& M = alpha.src();
  const DgModule& N = alpha.tgt();
  const Field& k = M.field();
  GradedModule m1 = shift_module(M.gm(), 1);
  DirectSum ds = direct_sum(m1, N.gm());
  HomMap d(ds.sum, ds.sum, 1);
  Scalar cs = Scalar::from_int(k, detail::mutations().flip_cone_sign ? 1 : -1);
  for (const auto& [z, b] : ds.sum.degrees()) {
    int r1 = m1.rank(z), r2 = N.rank(z);
    int c1 = m1.rank(z + 1), c2 = N.rank(z + 1);
    if (c1 + c2 == 0) continue;
    Mat m(k, r1 + r2, c1 + c2);
    Mat dm = M.d().block(z + 1);   // M^{z+1} -> M^{z+2}
    Mat al = alpha.block(z + 1);   // M^{z+1} -> N^{z+1}
    for (int i = 0; i < r1; ++i) {
      for (int j = 0; j < c1; ++j) m.at(i, j) = cs * dm.at(i, j);
      for (int j = 0; j < c2; ++j) m.at(i, c1 + j) = al.at(i, j);
    }
    Mat dn = N.d().block(z);
    for (int i = 0; i < r2; ++i)
      for (int j = 0; j < c2; ++j) m.at(r1 + i, c1 + j) = dn.at(i, j);
    d.set_block(z, m);
  }
  DgModule C(ds.sum, d);  // re-checks d^2 = 0
  DgModule M1(m1, shift_map(M.d(), 1));
  return ConeBundle{C, M1, ChainMap(N, C, ds.inj2), ChainMap(C, M1, ds.proj1), ds.inj1, alpha};
}

/// Cone(phi, psi): the block-diagonal chain map Cone alpha -> Cone alpha'
/// induced by a commuting square phi.alpha' = alpha.psi.
inline ChainMap cone_map(const ConeBundle& c, const ConeBundle& c2, const ChainMap& phi,
                         const ChainMap& psi) {
  if (compose(phi.hom(), c2.alpha.hom()) != compose(c.alpha.hom(), psi.hom()))
    throw precondition_error("cone_map: square does not commute");
  HomMap p1 = shift_map(phi.hom(), 1);
  const Field& k = c.cone.field();
  HomMap r(c.cone.gm(), c2.cone.gm(), 0);
  for (const auto& [z, b] : c.cone.gm().degrees()) {
    int r1 = c.m1.rank(z), r2 = c.alpha.tgt().rank(z);
    int s1 = c2.m1.rank(z), s2 = c2.alpha.tgt().rank(z);
    if (s1 + s2 == 0) continue;
    Mat m(k, r1 + r2, s1 + s2);
    Mat a = p1.block(z);
    for (int i = 0; i < r1; ++i)
      for (int j = 0; j < s1; ++j) m.at(i, j) = a.at(i, j);
    Mat bb = psi.block(z);
    for (int i = 0; i < r2; ++i)
      for (int j = 0; j < s2; ++j) m.at(r1 + i, s1 + j) = bb.at(i, j);
    r.set_block(z, m);
  }
  return ChainMap(c.cone, c2.cone, r);  // verifies the chain condition
}

// ---------------------------------------------------------------------------
// Homology

struct HomologyDeg {
  int dim = 0;
  Mat cycles;      // rows: basis of Z^z in ambient coordinates
  Mat boundaries;  // rows: basis of B^z in ambient coordinates
  Mat proj;        // cycle coordinates -> homology coordinates
  Mat reps;        // rows: chosen representatives in ambient coordinates
};

class Homology {
 public:
  Homology() = default;

  explicit Homology(const DgModule& x) : field_(x.field()) {
    for (const auto& [z, b] : x.gm().degrees()) {
      HomologyDeg h;
      h.cycles = kernel_basis(x.d().block(z));
      Mat bnd = x.d().block(z - 1);  // rows span boundaries
      {
        RrefResult br = rref(bnd);
        std::vector<std::vector<Scalar>> keep;
        for (size_t i = 0; i < br.pivots.size(); ++i) keep.push_back(br.reduced.row(static_cast<int>(i)));
        h.boundaries = Mat::from_rows(field_, keep, bnd.cols());
      }
      // boundary rows in cycle coordinates
      std::vector<std::vector<Scalar>> binz;
      for (int i = 0; i < bnd.rows(); ++i) {
        auto coeff = solve_right(h.cycles, bnd.row(i));
        if (!coeff) throw field_error("boundary outside cycles (d^2 != 0?)");
        binz.push_back(*coeff);
      }
      Mat bz = Mat::from_rows(field_, binz, h.cycles.rows());
      CokernelData ck = cokernel_data(bz);
      h.dim = ck.dim;
      h.proj = ck.projection;
      h.reps = ck.section * h.cycles;
      at_.emplace(z, std::move(h));
    }
  }

  const Field& field() const { return field_; }

  int dim(int z) const {
    auto it = at_.find(z);
    return it == at_.end() ? 0 : it->second.dim;
  }

  const HomologyDeg* deg(int z) const {
    auto it = at_.find(z);
    return it == at_.end() ? nullptr : &it->second;
  }

  /// Homology class of a cycle given in ambient coordinates.
  std::vector<Scalar> class_of(int z, const std::vector<Scalar>& cycle) const {
    auto it = at_.find(z);
    if (it == at_.end()) {
      if (!cycle.empty()) throw field_error("cycle in empty degree");
      return {};
    }
    auto coeff = solve_right(it->second.cycles, cycle);
    if (!coeff) throw precondition_error("vector is not a cycle");
    return row_times(*coeff, it->second.proj);
  }

 private:
  Field field_{};
  std::map<int, HomologyDeg> at_;
};

/// Matrix of H^z(f) with respect to the chosen representatives.
inline Mat induced_on_homology(const ChainMap& f, const Homology& hs, const Homology& ht, int z) {
  const Field& k = f.src().field();
  const HomologyDeg* s = hs.deg(z);
  int hsd = s ? s->dim : 0;
  int htd = ht.dim(z);
  Mat r(k, hsd, htd);
  if (hsd == 0 || f.tgt().rank(z) == 0) return r;
  Mat fm = f.block(z);
  for (int i = 0; i < hsd; ++i) {
    auto img = row_times(s->reps.row(i), fm);
    auto cls = ht.class_of(z, img);
    for (int j = 0; j < htd; ++j) r.at(i, j) = cls[j];
  }
  return r;
}

inline bool is_quasi_iso(const ChainMap& f) {
  Homology hs(f.src()), ht(f.tgt());
  int lo = std::min(f.src().gm().lo(), f.tgt().gm().lo());
  int hi = std::max(f.src().gm().hi(), f.tgt().gm().hi());
  for (int z = lo; z <= hi; ++z) {
    int a = hs.dim(z), b = ht.dim(z);
    if (a != b) return false;
    if (a == 0) continue;
    if (rank(induced_on_homology(f, hs, ht, z)) != a) return false;
  }
  return true;
}

inline bool is_epi(const ChainMap& f) {
  for (const auto& [z, b] : f.tgt().gm().degrees())
    if (rank(f.block(z)) != static_cast<int>(b.size())) return false;
  return true;
}

inline bool is_iso(const ChainMap& f) {
  for (const auto& [z, b] : f.src().gm().degrees())
    if (f.tgt().rank(z) != static_cast<int>(b.size())) return false;
  for (const auto& [z, b] : f.tgt().gm().degrees()) {
    if (f.src().rank(z) != static_cast<int>(b.size())) return false;
    if (rank(f.block(z)) != static_cast<int>(b.size())) return false;
  }
  return true;
}

inline ChainMap invert(const ChainMap& f) {
  if (!is_iso(f)) throw precondition_error("map is not an isomorphism");
  HomMap r(f.tgt().gm(), f.src().gm(), 0);
  for (const auto& [z, b] : f.tgt().gm().degrees())
    if (!b.empty()) r.set_block(z, inverse(f.block(z)));
  return ChainMap(f.tgt(), f.src(), r);
}

// ---------------------------------------------------------------------------
// The constructive lifting lemma and homotopy search

/// Given a surjective quasi-isomorphism g: U -> V and (u, v) with u in
/// U^{n+1}, v in V^n, u d = 0 and u g = v d, produce w in U^n with w d = u
/// and w g = v, following the constructive proof step by step.
inline std::vector<Scalar> lift_through_surjective_qiso(const ChainMap& g, int n,
                                                        const std::vector<Scalar>& u,
                                                        const std::vector<Scalar>& v) {
  const DgModule& U = g.src();
  const DgModule& V = g.tgt();
  const Field& k = U.field();
  if (!is_epi(g) || !is_quasi_iso(g))
    throw precondition_error("g is not a surjective quasi-isomorphism");
  if (static_cast<int>(u.size()) != U.rank(n + 1) || static_cast<int>(v.size()) != V.rank(n))
    throw precondition_error("element degrees do not match");
  auto zero_vec = [&](int len) { return std::vector<Scalar>(len, Scalar::zero(k)); };
  auto is_zero_vec = [](const std::vector<Scalar>& x) {
    for (const auto& s : x)
      if (!s.is_zero()) return false;
    return true;
  };
  if (!is_zero_vec(row_times(u, U.d().block(n + 1)))) throw precondition_error("u is not a cycle");
  {
    auto lhs = row_times(u, g.block(n + 1));
    auto rhs = row_times(v, V.d().block(n));
    for (size_t i = 0; i < lhs.size(); ++i)
      if (lhs[i] != rhs[i]) throw precondition_error("u g != v d");
  }
  Homology HU(U), HV(V);
  // [u] = 0 since H(g) is injective and [u g] = [v d] = 0: solve y d = u
  auto y = solve_right(U.d().block(n), u);
  if (!y) throw precondition_error("u is not a boundary (g not a quasi-isomorphism?)");
  auto c = row_times(*y, g.block(n));  // c = y g
  // c - v is a cycle; pick a cycle z in U with [z g] = [c - v]
  std::vector<Scalar> cmv(c.size(), Scalar::zero(k));
  for (size_t i = 0; i < c.size(); ++i) cmv[i] = c[i] - v[i];
  std::vector<Scalar> z = zero_vec(U.rank(n));
  if (!is_zero_vec(cmv) || HV.dim(n) > 0) {
    auto cls = HV.class_of(n, cmv);
    Mat hg = induced_on_homology(g, HU, HV, n);
    auto coeff = solve_right(hg, cls);
    if (!coeff) throw precondition_error("homology class does not lift");
    const HomologyDeg* hu = HU.deg(n);
    if (hu && hu->dim > 0) z = row_times(*coeff, hu->reps);
  }
  // z g = (c - v) + e d for some e in V^{n-1}
  auto zg = row_times(z, g.block(n));
  std::vector<Scalar> diff(zg.size(), Scalar::zero(k));
  for (size_t i = 0; i < zg.size(); ++i) diff[i] = zg[i] - cmv[i];
  auto e = solve_right(V.d().block(n - 1), diff);
  if (!e) throw precondition_error("difference is not a boundary");
  // e lifts to x with x g = e
  auto x = solve_right(g.block(n - 1), *e);
  if (!x) throw precondition_error("g not surjective in degree n-1");
  // w = y - z + x d
  auto xd = row_times(*x, U.d().block(n - 1));
  std::vector<Scalar> w(y->size(), Scalar::zero(k));
  for (size_t i = 0; i < w.size(); ++i) w[i] = (*y)[i] - z[i] + xd[i];
  return w;
}

/// Homotopy h with (h)d = f - g, when one exists: a single global linear
/// system over all degrees, solved with deterministic tie-breaking.
inline std::optional<HomMap> find_homotopy(const ChainMap& f, const ChainMap& g) {
  if (f.src() != g.src() || f.tgt() != g.tgt()) throw field_error("find_homotopy: type mismatch");
  const DgModule& S = f.src();
  const DgModule& T = f.tgt();
  const Field& k = S.field();
  // unknowns: entries of h at degree z (S^z -> T^{z-1})
  struct Block {
    int z, rows, cols, offset;
  };
  std::vector<Block> blocks;
  int nunk = 0;
  int lo = std::min(S.gm().lo(), T.gm().lo()) - 1, hi = std::max(S.gm().hi(), T.gm().hi()) + 1;
  for (int z = lo; z <= hi; ++z) {
    int r = S.rank(z), c = T.rank(z - 1);
    if (r && c) {
      blocks.push_back({z, r, c, nunk});
      nunk += r * c;
    }
  }
  auto block_of = [&](int z) -> const Block* {
    for (const auto& b : blocks)
      if (b.z == z) return &b;
    return nullptr;
  };
  // equations: for each z, h(z).d_T(z-1) + d_S(z).h(z+1) = (f-g)(z)
  struct Eq {
    int z, rows, cols, offset;
  };
  std::vector<Eq> eqs;
  int neq = 0;
  for (int z = lo; z <= hi; ++z) {
    int r = S.rank(z), c = T.rank(z);
    if (r && c) {
      eqs.push_back({z, r, c, neq});
      neq += r * c;
    }
  }
  Mat A(k, nunk, neq);
  std::vector<Scalar> rhs(neq, Scalar::zero(k));
  HomMap dfg = f.hom() - g.hom();
  for (const auto& eq : eqs) {
    Mat target = dfg.block(eq.z);
    for (int i = 0; i < eq.rows; ++i)
      for (int jj = 0; jj < eq.cols; ++jj) rhs[eq.offset + i * eq.cols + jj] = target.at(i, jj);
    if (const Block* b = block_of(eq.z)) {
      Mat dt = T.d().block(eq.z - 1);
      for (int i = 0; i < b->rows; ++i)
        for (int j = 0; j < b->cols; ++j)
          for (int jj = 0; jj < eq.cols; ++jj)
            A.at(b->offset + i * b->cols + j, eq.offset + i * eq.cols + jj) += dt.at(j, jj);
    }
    if (const Block* b = block_of(eq.z + 1)) {
      Mat ds = S.d().block(eq.z);
      for (int i = 0; i < eq.rows; ++i)
        for (int j = 0; j < b->rows; ++j)
          for (int jj = 0; jj < eq.cols; ++jj)
            A.at(b->offset + j * b->cols + jj, eq.offset + i * eq.cols + jj) += ds.at(i, j);
    }
  }
  auto sol = solve_right(A, rhs);
  if (!sol) return std::nullopt;
  HomMap h(S.gm(), T.gm(), -1);
  for (const auto& b : blocks) {
    Mat m(k, b.rows, b.cols);
    for (int i = 0; i < b.rows; ++i)
      for (int j = 0; j < b.cols; ++j) m.at(i, j) = (*sol)[b.offset + i * b.cols + j];
    h.set_block(b.z, m);
  }
  return h;
}

// ---------------------------------------------------------------------------
// Pushouts and sequential colimits

struct PushoutResult {
  DgModule object;
  ChainMap leg1;  // B -> P
  ChainMap leg2;  // C -> P
  DgModule bc;    // the ambient direct sum B ⊕ C
  HomMap proj;    // B ⊕ C -> P, degree 0
  HomMap sect;    // P -> B ⊕ C, degree 0 section of proj
};

/// Pushout of B <-phi- A -psi-> C as the cokernel of a -> (a phi, -a psi),
/// with the deterministic complement basis of cokernel_data.
inline PushoutResult pushout(const ChainMap& phi, const ChainMap& psi) {
  if (phi.src() != psi.src()) throw field_error("pushout: span sources differ");
  const DgModule& A = phi.src();
  const DgModule& B = phi.tgt();
  const DgModule& C = psi.tgt();
  const Field& k = A.field();
  DirectSum ds = direct_sum(B.gm(), C.gm());
  HomMap dbc(ds.sum, ds.sum, 1);
  for (const auto& [z, b] : ds.sum.degrees()) {
    int r1 = B.rank(z), r2 = C.rank(z), c1 = B.rank(z + 1), c2 = C.rank(z + 1);
    if (c1 + c2 == 0) continue;
    Mat m(k, r1 + r2, c1 + c2);
    Mat d1 = B.d().block(z), d2 = C.d().block(z);
    for (int i = 0; i < r1; ++i)
      for (int j = 0; j < c1; ++j) m.at(i, j) = d1.at(i, j);
    for (int i = 0; i < r2; ++i)
      for (int j = 0; j < c2; ++j) m.at(r1 + i, c1 + j) = d2.at(i, j);
    dbc.set_block(z, m);
  }
  DgModule BC(ds.sum, dbc);

  // relation rows: (a phi, -a psi)
  HomMap rel(A.gm(), ds.sum, 0);
  for (const auto& [z, b] : A.gm().degrees()) {
    int c1 = B.rank(z), c2 = C.rank(z);
    if (c1 + c2 == 0) continue;
    Mat m(k, A.rank(z), c1 + c2);
    Mat p = phi.block(z), q = psi.block(z);
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < c1; ++j) m.at(i, j) = p.at(i, j);
      for (int j = 0; j < c2; ++j) m.at(i, c1 + j) = -q.at(i, j);
    }
    rel.set_block(z, m);
  }

  std::map<int, std::vector<std::string>> pbasis;
  HomMap proj(ds.sum, GradedModule(k), 0), sect(GradedModule(k), ds.sum, 0);
  std::map<int, CokernelData> cks;
  for (const auto& [z, b] : ds.sum.degrees()) {
    CokernelData ck = cokernel_data(rel.block(z));
    if (ck.dim > 0) {
      std::vector<std::string> lab;
      for (int t : ck.kept) lab.push_back(b[t]);
      pbasis[z] = std::move(lab);
    }
    cks.emplace(z, std::move(ck));
  }
  GradedModule P(k, pbasis);
  proj = HomMap(ds.sum, P, 0);
  sect = HomMap(P, ds.sum, 0);
  for (auto& [z, ck] : cks) {
    if (ck.dim == 0) continue;
    proj.set_block(z, ck.projection);
    sect.set_block(z, ck.section);
  }
  HomMap dp = compose(compose(sect, dbc), proj);
  DgModule Pm(P, dp);
  ChainMap leg1(B, Pm, compose(ds.inj1, proj));
  ChainMap leg2(C, Pm, compose(ds.inj2, proj));
  return PushoutResult{Pm, leg1, leg2, BC, proj, sect};
}

/// Mediating map for a commuting cocone (b: B -> Q, c: C -> Q).
inline ChainMap pushout_mediator(const PushoutResult& po, const ChainMap& b, const ChainMap& c) {
  const Field& k = po.object.field();
  HomMap stacked(po.bc.gm(), b.tgt().gm(), 0);
  for (const auto& [z, lab] : po.bc.gm().degrees()) {
    int r1 = b.src().rank(z), r2 = c.src().rank(z), cols = b.tgt().rank(z);
    if (cols == 0) continue;
    Mat m(k, r1 + r2, cols);
    Mat mb = b.block(z), mc = c.block(z);
    for (int i = 0; i < r1; ++i)
      for (int j = 0; j < cols; ++j) m.at(i, j) = mb.at(i, j);
    for (int i = 0; i < r2; ++i)
      for (int j = 0; j < cols; ++j) m.at(r1 + i, j) = mc.at(i, j);
    stacked.set_block(z, m);
  }
  ChainMap med(po.object, b.tgt(), compose(po.sect, stacked));
  if (compose(po.leg1, med) != b || compose(po.leg2, med) != c)
    throw precondition_error("cocone does not commute with the span");
  return med;
}

struct SequentialColimit {
  DgModule object;
  std::vector<ChainMap> legs;  // D_i -> D_n
  bool stabilized = false;
};

/// Finite-stage stand-in for the sequential colimit: the last object, with
/// cocone legs and a stabilization flag (last map an isomorphism in every
/// degree of the window).
inline SequentialColimit sequential_colimit(const std::vector<ChainMap>& chain) {
  if (chain.empty()) throw field_error("sequential_colimit: empty chain");
  SequentialColimit r;
  r.object = chain.back().tgt();
  std::vector<ChainMap> legs;
  ChainMap acc = ChainMap::identity(r.object);
  legs.push_back(acc);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    acc = compose(*it, acc);
    legs.push_back(acc);
  }
  r.legs.assign(legs.rbegin(), legs.rend());
  r.stabilized = is_iso(chain.back());
  return r;
}

}  // namespace dgm

#endif
