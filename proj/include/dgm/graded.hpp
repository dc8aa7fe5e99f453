#ifndef DGM_GRADED_HPP
#define DGM_GRADED_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace dgm {

namespace detail {
/// Injected sign faults for the mutation-sensitivity suite.  All zero in
/// normal operation.
struct Mutations {
  bool flip_shift_sign = false;
  bool flip_cone_sign = false;
  bool flip_symmetry_sign = false;
};
inline Mutations& mutations() {
  static thread_local Mutations m;
  return m;
}
}  // namespace detail

inline int sign_pow(long long e) { return (e % 2 + 2) % 2 == 0 ? 1 : -1; }

/// Suspension marker bookkeeping on basis labels: "x" shifted by a becomes
/// "x·σ^a", and repeated shifts accumulate so that shifting by a then b
/// yields the same label as shifting by a+b.
inline std::string decorate_label(const std::string& label, int a) {
  if (a == 0) return label;
  const std::string marker = "\xc2\xb7\xcf\x83^";  // "·σ^"
  size_t pos = label.rfind(marker);
  std::string base = label;
  int k = 0;
  if (pos != std::string::npos) {
    try {
      size_t idx = 0;
      std::string tail = label.substr(pos + marker.size());
      int parsed = std::stoi(tail, &idx);
      if (idx == tail.size()) {
        base = label.substr(0, pos);
        k = parsed;
      }
    } catch (...) {
    }
  }
  int total = k + a;
  if (total == 0) return base;
  return base + marker + std::to_string(total);
}

/// Degreewise finite free graded module with ordered, labeled bases.
class GradedModule {
 public:
  GradedModule() = default;
  explicit GradedModule(const Field& f) : field_(f) {}

  GradedModule(const Field& f, std::map<int, std::vector<std::string>> basis)
      : field_(f), basis_(std::move(basis)) {
    for (auto it = basis_.begin(); it != basis_.end();) {
      if (it->second.empty()) {
        it = basis_.erase(it);
        continue;
      }
      std::set<std::string> seen;
      for (const auto& l : it->second)
        if (!seen.insert(l).second)
          throw field_error("duplicate basis label '" + l + "' in degree " + std::to_string(it->first));
      ++it;
    }
  }

  static GradedModule unit_at(const Field& f, int degree, const std::string& label = "e") {
    return GradedModule(f, {{degree, {label}}});
  }

  const Field& field() const { return field_; }
  const std::map<int, std::vector<std::string>>& degrees() const { return basis_; }

  int rank(int z) const {
    auto it = basis_.find(z);
    return it == basis_.end() ? 0 : static_cast<int>(it->second.size());
  }

  const std::vector<std::string>& basis(int z) const {
    static const std::vector<std::string> empty;
    auto it = basis_.find(z);
    return it == basis_.end() ? empty : it->second;
  }

  bool trivial() const { return basis_.empty(); }
  int total_dim() const {
    int n = 0;
    for (const auto& [z, b] : basis_) n += static_cast<int>(b.size());
    return n;
  }
  int lo() const { return basis_.empty() ? 0 : basis_.begin()->first; }
  int hi() const { return basis_.empty() ? 0 : basis_.rbegin()->first; }

  friend bool operator==(const GradedModule& a, const GradedModule& b) {
    return a.field_ == b.field_ && a.basis_ == b.basis_;
  }
  friend bool operator!=(const GradedModule& a, const GradedModule& b) { return !(a == b); }

 private:
  Field field_{};
  std::map<int, std::vector<std::string>> basis_;
};

/// Homogeneous k-linear map of fixed degree between graded modules.  The
/// block at z sends coordinate rows over the source basis in degree z to
/// rows over the target basis in degree z+deg; blocks are stored exactly
/// where both ranks are nonzero.
class HomMap {
 public:
  HomMap() = default;

  HomMap(GradedModule src, GradedModule tgt, int deg)
      : src_(std::move(src)), tgt_(std::move(tgt)), deg_(deg) {
    if (src_.field() != tgt_.field()) throw field_error("field mismatch in map");
  }

  static HomMap identity(const GradedModule& m) {
    HomMap f(m, m, 0);
    for (const auto& [z, b] : m.degrees()) f.set_block(z, Mat::identity(m.field(), m.rank(z)));
    return f;
  }

  const GradedModule& src() const { return src_; }
  const GradedModule& tgt() const { return tgt_; }
  int deg() const { return deg_; }

  Mat block(int z) const {
    auto it = mats_.find(z);
    if (it != mats_.end()) return it->second;
    return Mat(src_.field(), src_.rank(z), tgt_.rank(z + deg_));
  }

  void set_block(int z, const Mat& m) {
    if (m.rows() != src_.rank(z) || m.cols() != tgt_.rank(z + deg_))
      throw field_error("block shape mismatch at degree " + std::to_string(z));
    if (m.rows() == 0 || m.cols() == 0) return;
    if (src_.field().kind == FieldKind::Graded)
      for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
          if (m.at(i, j).u_exponent() != 0)
            throw field_error("u-exponent not forced by degrees");  // generator bookkeeping forces 0
    mats_[z] = m;
  }

  Scalar entry(int z, int i, int j) const { return block(z).at(i, j); }

  bool is_zero() const {
    for (const auto& [z, m] : mats_)
      if (!m.is_zero()) return false;
    return true;
  }

  HomMap operator+(const HomMap& o) const {
    check_parallel(o);
    HomMap r(src_, tgt_, deg_);
    for (const auto& [z, b] : src_.degrees())
      if (tgt_.rank(z + deg_) > 0) r.set_block(z, block(z) + o.block(z));
    return r;
  }

  HomMap operator-(const HomMap& o) const {
    check_parallel(o);
    HomMap r(src_, tgt_, deg_);
    for (const auto& [z, b] : src_.degrees())
      if (tgt_.rank(z + deg_) > 0) r.set_block(z, block(z) - o.block(z));
    return r;
  }

  HomMap operator-() const { return scaled(Scalar::from_int(src_.field(), -1)); }

  HomMap scaled(const Scalar& c) const {
    HomMap r(src_, tgt_, deg_);
    for (const auto& [z, m] : mats_) r.set_block(z, m.scaled(c));
    return r;
  }

  friend bool operator==(const HomMap& a, const HomMap& b) {
    if (a.src_ != b.src_ || a.tgt_ != b.tgt_ || a.deg_ != b.deg_) return false;
    for (const auto& [z, bb] : a.src_.degrees())
      if (a.tgt_.rank(z + a.deg_) > 0 && a.block(z) != b.block(z)) return false;
    return true;
  }
  friend bool operator!=(const HomMap& a, const HomMap& b) { return !(a == b); }

 private:
  void check_parallel(const HomMap& o) const {
    if (src_ != o.src_ || tgt_ != o.tgt_ || deg_ != o.deg_)
      throw field_error("maps are not parallel");
  }

  GradedModule src_, tgt_;
  int deg_ = 0;
  std::map<int, Mat> mats_;
};

/// Left-to-right composition: apply f, then g.
inline HomMap compose(const HomMap& f, const HomMap& g) {
  if (f.tgt() != g.src()) throw field_error("composition type mismatch");
  HomMap r(f.src(), g.tgt(), f.deg() + g.deg());
  for (const auto& [z, b] : f.src().degrees())
    if (g.tgt().rank(z + r.deg()) > 0) r.set_block(z, f.block(z) * g.block(z + f.deg()));
  return r;
}

// ---------------------------------------------------------------------------
// Shift calculus

inline GradedModule shift_module(const GradedModule& m, int a) {
  std::map<int, std::vector<std::string>> basis;
  for (const auto& [z, b] : m.degrees()) {
    std::vector<std::string> lab;
    lab.reserve(b.size());
    for (const auto& l : b) lab.push_back(decorate_label(l, a));
    basis[z - a] = std::move(lab);
  }
  return GradedModule(m.field(), std::move(basis));
}

/// f[a] = (-1)^{deg(f)*a} sigma^{-a} f sigma^a.
inline HomMap shift_map(const HomMap& f, int a) {
  HomMap r(shift_module(f.src(), a), shift_module(f.tgt(), a), f.deg());
  int s = sign_pow(static_cast<long long>(f.deg()) * a);
  if (detail::mutations().flip_shift_sign) s = -s;
  Scalar c = Scalar::from_int(f.src().field(), s);
  for (const auto& [z, b] : f.src().degrees())
    if (f.tgt().rank(z + f.deg()) > 0) r.set_block(z - a, f.block(z).scaled(c));
  return r;
}

/// The degree -a "identity map" sigma^a : M -> M[a].
inline HomMap sigma(const GradedModule& m, int a) {
  HomMap r(m, shift_module(m, a), -a);
  for (const auto& [z, b] : m.degrees()) r.set_block(z, Mat::identity(m.field(), m.rank(z)));
  return r;
}

/// Inverse of sigma(m, a): M[a] -> M, degree a.
inline HomMap sigma_inverse(const GradedModule& m, int a) {
  HomMap r(shift_module(m, a), m, a);
  for (const auto& [z, b] : m.degrees()) r.set_block(z - a, Mat::identity(m.field(), m.rank(z)));
  return r;
}

// ---------------------------------------------------------------------------
// Tensor products and the Koszul symmetry

inline GradedModule tensor(const GradedModule& v, const GradedModule& w) {
  if (v.field() != w.field()) throw field_error("field mismatch in tensor");
  std::map<int, std::vector<std::string>> basis;
  for (const auto& [i, bv] : v.degrees())
    for (const auto& [j, bw] : w.degrees()) {
      auto& lab = basis[i + j];
      for (const auto& x : bv)
        for (const auto& y : bw) lab.push_back(x + "\xe2\x8a\x97" + y);  // x⊗y
    }
  return GradedModule(v.field(), std::move(basis));
}

namespace detail {
struct TensorSlot {
  int i = 0;        // first-factor degree
  int vi = 0, wj = 0;  // positions within the factor bases
};
/// Basis order of (V⊗W)^z: first-factor degree ascending, then lexicographic
/// in the factor positions — matching tensor().
inline std::vector<TensorSlot> tensor_slots(const GradedModule& v, const GradedModule& w, int z) {
  std::vector<TensorSlot> slots;
  for (const auto& [i, bv] : v.degrees()) {
    int j = z - i;
    int wr = w.rank(j);
    if (wr == 0) continue;
    for (int a = 0; a < static_cast<int>(bv.size()); ++a)
      for (int b = 0; b < wr; ++b) slots.push_back({i, a, b});
  }
  return slots;
}
inline int slot_index(const std::vector<TensorSlot>& slots, int i, int vi, int wj) {
  for (size_t k = 0; k < slots.size(); ++k)
    if (slots[k].i == i && slots[k].vi == vi && slots[k].wj == wj) return static_cast<int>(k);
  return -1;
}
}  // namespace detail

/// f⊗g with the Koszul sign (-1)^{deg(g)*i} on the V^i block.
inline HomMap tensor_map(const HomMap& f, const HomMap& g) {
  GradedModule S = tensor(f.src(), g.src());
  GradedModule T = tensor(f.tgt(), g.tgt());
  HomMap r(S, T, f.deg() + g.deg());
  const Field& k = S.field();
  for (const auto& [z, b] : S.degrees()) {
    int tz = z + r.deg();
    if (T.rank(tz) == 0) continue;
    auto ss = detail::tensor_slots(f.src(), g.src(), z);
    auto ts = detail::tensor_slots(f.tgt(), g.tgt(), tz);
    Mat m(k, static_cast<int>(ss.size()), static_cast<int>(ts.size()));
    for (size_t a = 0; a < ss.size(); ++a) {
      const auto& s = ss[a];
      Mat fb = f.block(s.i);
      Mat gb = g.block(z - s.i);
      // Koszul: the first operator passes over the second element (right
      // operator convention), sign (-1)^{deg(f)*deg(w)}.
      Scalar sign = Scalar::from_int(k, sign_pow(static_cast<long long>(f.deg()) * (z - s.i)));
      for (size_t c = 0; c < ts.size(); ++c) {
        const auto& t = ts[c];
        if (t.i != s.i + f.deg()) continue;
        if (fb.cols() == 0 || gb.cols() == 0) continue;
        m.at(static_cast<int>(a), static_cast<int>(c)) = sign * fb.at(s.vi, t.vi) * gb.at(s.wj, t.wj);
      }
    }
    r.set_block(z, m);
  }
  return r;
}

/// Koszul symmetry c: V⊗W -> W⊗V, x⊗y -> (-1)^{deg x * deg y} y⊗x.
inline HomMap symmetry(const GradedModule& v, const GradedModule& w) {
  GradedModule S = tensor(v, w), T = tensor(w, v);
  HomMap r(S, T, 0);
  const Field& k = v.field();
  for (const auto& [z, b] : S.degrees()) {
    auto ss = detail::tensor_slots(v, w, z);
    auto ts = detail::tensor_slots(w, v, z);
    Mat m(k, static_cast<int>(ss.size()), static_cast<int>(ts.size()));
    for (size_t a = 0; a < ss.size(); ++a) {
      const auto& s = ss[a];
      int j = z - s.i;
      int sign = sign_pow(static_cast<long long>(s.i) * j);
      if (detail::mutations().flip_symmetry_sign) sign = -sign;
      int c = detail::slot_index(ts, j, s.wj, s.vi);
      m.at(static_cast<int>(a), c) = Scalar::from_int(k, sign);
    }
    r.set_block(z, m);
  }
  return r;
}

struct ShiftAbsorb {
  HomMap left_signed;     // (V⊗W)[a] -> (V[a])⊗W, (v⊗w)σ^a -> (-1)^{deg(w)*a} vσ^a⊗w
  HomMap right_unsigned;  // (V⊗W)[a] -> V⊗(W[a]),  (v⊗w)σ^a ->            v⊗wσ^a
};

inline ShiftAbsorb shift_absorb(const GradedModule& v, const GradedModule& w, int a) {
  const Field& k = v.field();
  GradedModule VW = tensor(v, w);
  GradedModule S = shift_module(VW, a);
  GradedModule TL = tensor(shift_module(v, a), w);
  GradedModule TR = tensor(v, shift_module(w, a));
  ShiftAbsorb r{HomMap(S, TL, 0), HomMap(S, TR, 0)};
  for (const auto& [z, b] : S.degrees()) {
    auto ss = detail::tensor_slots(v, w, z + a);
    auto tl = detail::tensor_slots(shift_module(v, a), w, z);
    auto tr = detail::tensor_slots(v, shift_module(w, a), z);
    Mat ml(k, static_cast<int>(ss.size()), static_cast<int>(tl.size()));
    Mat mr(k, static_cast<int>(ss.size()), static_cast<int>(tr.size()));
    for (size_t s = 0; s < ss.size(); ++s) {
      int i = ss[s].i, j = z + a - ss[s].i;
      int cl = detail::slot_index(tl, i - a, ss[s].vi, ss[s].wj);
      int cr = detail::slot_index(tr, i, ss[s].vi, ss[s].wj);
      ml.at(static_cast<int>(s), cl) = Scalar::from_int(k, sign_pow(static_cast<long long>(j) * a));
      mr.at(static_cast<int>(s), cr) = Scalar::one(k);
    }
    r.left_signed.set_block(z, ml);
    r.right_unsigned.set_block(z, mr);
  }
  return r;
}

/// Direct sum with first-summand basis listed first; labels must stay
/// unique, colliding right-hand labels get a prime suffix.
struct DirectSum {
  GradedModule sum;
  HomMap inj1, inj2;   // degree-0 inclusions
  HomMap proj1, proj2; // degree-0 projections
};

inline DirectSum direct_sum(const GradedModule& v, const GradedModule& w) {
  if (v.field() != w.field()) throw field_error("field mismatch in direct sum");
  std::map<int, std::vector<std::string>> basis;
  for (const auto& [z, b] : v.degrees()) basis[z] = b;
  for (const auto& [z, b] : w.degrees()) {
    auto& lab = basis[z];
    std::set<std::string> seen(lab.begin(), lab.end());
    for (const auto& l : b) {
      std::string name = l;
      while (seen.count(name)) name += "\xe2\x80\xb2";  // prime mark
      seen.insert(name);
      lab.push_back(name);
    }
  }
  GradedModule s(v.field(), std::move(basis));
  DirectSum r{s, HomMap(v, s, 0), HomMap(w, s, 0), HomMap(s, v, 0), HomMap(s, w, 0)};
  const Field& k = v.field();
  for (const auto& [z, b] : s.degrees()) {
    int rv = v.rank(z), rw = w.rank(z), rs = rv + rw;
    Mat i1(k, rv, rs), i2(k, rw, rs), p1(k, rs, rv), p2(k, rs, rw);
    for (int i = 0; i < rv; ++i) i1.at(i, i) = p1.at(i, i) = Scalar::one(k);
    for (int i = 0; i < rw; ++i) i2.at(i, rv + i) = p2.at(rv + i, i) = Scalar::one(k);
    if (rv) {
      r.inj1.set_block(z, i1);
      r.proj1.set_block(z, p1);
    }
    if (rw) {
      r.inj2.set_block(z, i2);
      r.proj2.set_block(z, p2);
    }
  }
  return r;
}

}  // namespace dgm

#endif
