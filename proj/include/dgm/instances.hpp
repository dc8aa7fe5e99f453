#ifndef DGM_INSTANCES_HPP
#define DGM_INSTANCES_HPP

#include "dg.hpp"
#include "rng.hpp"

namespace dgm {

/// Random invertible degree-0 change of basis: L*U with unit diagonals and
/// small random off-diagonal entries.
inline Mat random_invertible(SplitMix64& rng, const Field& f, int n) {
  Mat l = Mat::identity(f, n), u = Mat::identity(f, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i > j) l.at(i, j) = Scalar::from_int(f, rng.int_in(-2, 2));
      if (i < j) u.at(i, j) = Scalar::from_int(f, rng.int_in(-2, 2));
    }
  return l * u;
}

struct ConjugatedDg {
  DgModule module;
  ChainMap to_original;  // isomorphism onto the un-conjugated model
};

/// Same graded module, differential conjugated by a random automorphism.
inline ConjugatedDg conjugate_dg(SplitMix64& rng, const DgModule& x) {
  const Field& k = x.field();
  std::map<int, Mat> p, pinv;
  for (const auto& [z, b] : x.gm().degrees()) {
    Mat m = random_invertible(rng, k, static_cast<int>(b.size()));
    pinv.emplace(z, inverse(m));
    p.emplace(z, std::move(m));
  }
  HomMap d(x.gm(), x.gm(), 1);
  for (const auto& [z, b] : x.gm().degrees()) {
    if (x.rank(z + 1) == 0) continue;
    d.set_block(z, pinv.at(z) * x.d().block(z) * p.at(z + 1));
  }
  DgModule y(x.gm(), d);
  HomMap iso(x.gm(), x.gm(), 0);
  for (auto& [z, m] : pinv) iso.set_block(z, m);
  return ConjugatedDg{y, ChainMap(y, x, iso)};
}

/// Direct sum of shifted units and shifted cones of the identity, then a
/// random change of basis: homology dimension in each degree equals the
/// number of units placed there, a ground truth the tests lean on.
inline DgModule random_dg(SplitMix64& rng, const Field& f, int lo, int hi, int n_units,
                          int n_cones) {
  std::map<int, std::vector<std::string>> basis;
  std::map<int, std::vector<std::pair<int, int>>> arrows;  // z -> (row in z, col in z+1)
  int tag = 0;
  for (int i = 0; i < n_units; ++i) {
    int z = static_cast<int>(rng.int_in(lo, hi));
    basis[z].push_back("u" + std::to_string(tag++));
  }
  for (int i = 0; i < n_cones && lo < hi; ++i) {
    int a = static_cast<int>(rng.int_in(lo + 1, hi));  // cone occupies degrees a-1, a
    basis[a - 1].push_back("c" + std::to_string(tag));
    basis[a].push_back("c" + std::to_string(tag) + "'");
    arrows[a - 1].push_back({static_cast<int>(basis[a - 1].size()) - 1,
                             static_cast<int>(basis[a].size()) - 1});
    ++tag;
  }
  GradedModule gm(f, basis);
  HomMap d(gm, gm, 1);
  for (const auto& [z, as] : arrows) {
    Mat m(f, gm.rank(z), gm.rank(z + 1));
    for (auto [i, j] : as) m.at(i, j) = Scalar::one(f);
    d.set_block(z, m);
  }
  return conjugate_dg(rng, DgModule(gm, d)).module;
}

/// Random homogeneous map of the given degree with small integer entries.
inline HomMap random_hom(SplitMix64& rng, const GradedModule& s, const GradedModule& t, int deg) {
  HomMap h(s, t, deg);
  for (const auto& [z, b] : s.degrees()) {
    int cols = t.rank(z + deg);
    if (cols == 0) continue;
    Mat m(s.field(), static_cast<int>(b.size()), cols);
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < cols; ++j) m.at(i, j) = Scalar::from_int(s.field(), rng.int_in(-3, 3));
    h.set_block(z, m);
  }
  return h;
}

/// Random chain map: boundary of a random degree -1 homogeneous map, which
/// satisfies the chain condition automatically.
inline ChainMap random_chain_map(SplitMix64& rng, const DgModule& s, const DgModule& t) {
  return ChainMap(s, t, map_boundary(s, t, random_hom(rng, s.gm(), t.gm(), -1)));
}

struct SurjectiveQiso {
  ChainMap map;        // U -> V, degreewise surjective quasi-isomorphism
  DgModule acyclic;    // the cone part of U's un-conjugated model
};

/// U = (X ⊕ acyclic) and V = X, both conjugated, with the projection in
/// between: a surjective quasi-isomorphism with known structure.
inline SurjectiveQiso random_surjective_qiso(SplitMix64& rng, const Field& f, int lo, int hi,
                                             int n_units, int n_cones, int extra_cones) {
  DgModule x0 = random_dg(rng, f, lo, hi, n_units, n_cones);
  DgModule a0 = random_dg(rng, f, lo, hi, 0, extra_cones);
  // plain direct sum U0 = x0 ⊕ a0
  DirectSum ds = direct_sum(x0.gm(), a0.gm());
  HomMap d(ds.sum, ds.sum, 1);
  for (const auto& [z, b] : ds.sum.degrees()) {
    int r1 = x0.rank(z), r2 = a0.rank(z), c1 = x0.rank(z + 1), c2 = a0.rank(z + 1);
    if (c1 + c2 == 0) continue;
    Mat m(f, r1 + r2, c1 + c2);
    Mat d1 = x0.d().block(z), d2 = a0.d().block(z);
    for (int i = 0; i < r1; ++i)
      for (int j = 0; j < c1; ++j) m.at(i, j) = d1.at(i, j);
    for (int i = 0; i < r2; ++i)
      for (int j = 0; j < c2; ++j) m.at(r1 + i, c1 + j) = d2.at(i, j);
    d.set_block(z, m);
  }
  DgModule u0(ds.sum, d);
  ConjugatedDg cu = conjugate_dg(rng, u0);
  ConjugatedDg cv = conjugate_dg(rng, x0);
  ChainMap proj(u0, x0, ds.proj1);
  ChainMap g = compose(compose(cu.to_original, proj), invert(cv.to_original));
  return SurjectiveQiso{ChainMap(cu.module, cv.module, g.hom()), a0};
}

/// Quasi-isomorphic twin of x: same homology, scrambled basis, linked by an
/// isomorphism perturbed with a null-homotopic part.
inline ChainMap random_quasi_iso(SplitMix64& rng, const DgModule& x) {
  ConjugatedDg c = conjugate_dg(rng, x);
  ConjugatedDg c2 = conjugate_dg(rng, x);
  ChainMap iso = compose(c.to_original, invert(c2.to_original));
  HomMap pert = map_boundary(c.module, c2.module, random_hom(rng, c.module.gm(), c2.module.gm(), -1));
  return ChainMap(c.module, c2.module, iso.hom() + pert);
}

}  // namespace dgm

#endif
