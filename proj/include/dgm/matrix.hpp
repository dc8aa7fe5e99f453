#ifndef DGM_MATRIX_HPP
#define DGM_MATRIX_HPP

#include <optional>
#include <vector>

#include "scalar.hpp"

namespace dgm {

/// Dense matrix of exact scalars.  Row vectors act on the right: a row v of
/// length rows() maps to v*M of length cols(), and composition of matrices
/// reads left to right.
class Mat {
 public:
  Mat() = default;

  Mat(const Field& f, int rows, int cols)
      : f_(f), rows_(rows), cols_(cols), e_(static_cast<size_t>(rows) * cols, Scalar::zero(f)) {}

  static Mat identity(const Field& f, int n) {
    Mat m(f, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Scalar::one(f);
    return m;
  }

  static Mat from_ints(const Field& f, std::vector<std::vector<long long>> rows) {
    int r = static_cast<int>(rows.size());
    int c = r ? static_cast<int>(rows[0].size()) : 0;
    Mat m(f, r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m.at(i, j) = Scalar::from_int(f, rows[i][j]);
    return m;
  }

  const Field& field() const { return f_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Scalar& at(int i, int j) { return e_[static_cast<size_t>(i) * cols_ + j]; }
  const Scalar& at(int i, int j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }

  bool is_zero() const {
    for (const auto& s : e_)
      if (!s.is_zero()) return false;
    return true;
  }

  Mat operator+(const Mat& o) const {
    require_shape(o.rows_, o.cols_);
    Mat r = *this;
    for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = r.e_[i] + o.e_[i];
    return r;
  }

  Mat operator-(const Mat& o) const {
    require_shape(o.rows_, o.cols_);
    Mat r = *this;
    for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = r.e_[i] - o.e_[i];
    return r;
  }

  Mat operator-() const {
    Mat r = *this;
    for (auto& s : r.e_) s = -s;
    return r;
  }

  Mat scaled(const Scalar& c) const {
    Mat r = *this;
    for (auto& s : r.e_) s = s * c;
    return r;
  }

  /// Left-to-right composition: (this * o) applies this, then o.
  Mat operator*(const Mat& o) const {
    if (cols_ != o.rows_) throw field_error("matrix shape mismatch in product");
    Mat r(f_, rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const Scalar& a = at(i, k);
        if (a.is_zero()) continue;
        for (int j = 0; j < o.cols_; ++j) {
          const Scalar& b = o.at(k, j);
          if (!b.is_zero()) r.at(i, j) += a * b;
        }
      }
    return r;
  }

  friend bool operator==(const Mat& a, const Mat& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (size_t i = 0; i < a.e_.size(); ++i)
      if (a.e_[i] != b.e_[i]) return false;
    return true;
  }
  friend bool operator!=(const Mat& a, const Mat& b) { return !(a == b); }

  Mat transpose() const {
    Mat r(f_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
  }

  std::vector<Scalar> row(int i) const {
    std::vector<Scalar> r(cols_, Scalar::zero(f_));
    for (int j = 0; j < cols_; ++j) r[j] = at(i, j);
    return r;
  }

  void set_row(int i, const std::vector<Scalar>& v) {
    for (int j = 0; j < cols_; ++j) at(i, j) = v[j];
  }

  static Mat from_rows(const Field& f, const std::vector<std::vector<Scalar>>& rows, int cols) {
    Mat m(f, static_cast<int>(rows.size()), cols);
    for (size_t i = 0; i < rows.size(); ++i) m.set_row(static_cast<int>(i), rows[i]);
    return m;
  }

  /// [this | o] side by side (same row count).
  Mat hstack(const Mat& o) const {
    if (rows_ != o.rows_) throw field_error("hstack row mismatch");
    Mat r(f_, rows_, cols_ + o.cols_);
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
      for (int j = 0; j < o.cols_; ++j) r.at(i, cols_ + j) = o.at(i, j);
    }
    return r;
  }

  /// [this; o] stacked (same column count).
  Mat vstack(const Mat& o) const {
    if (cols_ != o.cols_) throw field_error("vstack column mismatch");
    Mat r(f_, rows_ + o.rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
    for (int i = 0; i < o.rows_; ++i)
      for (int j = 0; j < cols_; ++j) r.at(rows_ + i, j) = o.at(i, j);
    return r;
  }

 private:
  void require_shape(int r, int c) const {
    if (rows_ != r || cols_ != c) throw field_error("matrix shape mismatch");
  }

  Field f_{};
  int rows_ = 0, cols_ = 0;
  std::vector<Scalar> e_;
};

inline std::vector<Scalar> row_times(const std::vector<Scalar>& v, const Mat& m) {
  if (static_cast<int>(v.size()) != m.rows()) throw field_error("row length mismatch");
  std::vector<Scalar> r(m.cols(), Scalar::zero(m.field()));
  for (int i = 0; i < m.rows(); ++i) {
    if (v[i].is_zero()) continue;
    for (int j = 0; j < m.cols(); ++j) {
      const Scalar& b = m.at(i, j);
      if (!b.is_zero()) r[j] += v[i] * b;
    }
  }
  return r;
}

struct RrefResult {
  Mat reduced;
  std::vector<int> pivots;  // strictly increasing pivot columns
  Mat row_ops;              // invertible; row_ops * input == reduced
};

/// Gauss-Jordan with deterministic pivoting: in each column, the first row
/// (from the current one down) with a nonzero entry.
inline RrefResult rref(const Mat& m) {
  RrefResult res{m, {}, Mat::identity(m.field(), m.rows())};
  Mat& a = res.reduced;
  Mat& r = res.row_ops;
  int cur = 0;
  for (int col = 0; col < a.cols() && cur < a.rows(); ++col) {
    int piv = -1;
    for (int i = cur; i < a.rows(); ++i)
      if (!a.at(i, col).is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != cur) {
      for (int j = 0; j < a.cols(); ++j) std::swap(a.at(cur, j), a.at(piv, j));
      for (int j = 0; j < r.cols(); ++j) std::swap(r.at(cur, j), r.at(piv, j));
    }
    Scalar inv = a.at(cur, col).inverse();
    for (int j = 0; j < a.cols(); ++j) a.at(cur, j) *= inv;
    for (int j = 0; j < r.cols(); ++j) r.at(cur, j) *= inv;
    for (int i = 0; i < a.rows(); ++i) {
      if (i == cur || a.at(i, col).is_zero()) continue;
      Scalar f = a.at(i, col);
      for (int j = 0; j < a.cols(); ++j) a.at(i, j) -= f * a.at(cur, j);
      for (int j = 0; j < r.cols(); ++j) r.at(i, j) -= f * r.at(cur, j);
    }
    res.pivots.push_back(col);
    ++cur;
  }
  return res;
}

inline int rank(const Mat& m) { return static_cast<int>(rref(m).pivots.size()); }

inline Mat inverse(const Mat& m) {
  if (m.rows() != m.cols()) throw field_error("inverse: not square");
  RrefResult rr = rref(m);
  if (static_cast<int>(rr.pivots.size()) != m.rows()) throw field_error("inverse: singular matrix");
  return rr.row_ops;
}

/// Basis of {v : v*m = 0} as rows, canonical: the free-variable basis read
/// off the rref of m^T, each vector scaled so its first nonzero entry is 1,
/// ordered by free coordinate.
inline Mat kernel_basis(const Mat& m) {
  const Field& f = m.field();
  RrefResult t = rref(m.transpose());
  int n = m.rows();
  std::vector<bool> is_pivot(n, false);
  for (int p : t.pivots) is_pivot[p] = true;
  std::vector<std::vector<Scalar>> rows;
  for (int j = 0; j < n; ++j) {
    if (is_pivot[j]) continue;
    std::vector<Scalar> v(n, Scalar::zero(f));
    v[j] = Scalar::one(f);
    for (size_t i = 0; i < t.pivots.size(); ++i) v[t.pivots[i]] = -t.reduced.at(static_cast<int>(i), j);
    // leading-one normalization
    for (int k = 0; k < n; ++k)
      if (!v[k].is_zero()) {
        Scalar inv = v[k].inverse();
        for (int l = 0; l < n; ++l) v[l] *= inv;
        break;
      }
    rows.push_back(std::move(v));
  }
  return Mat::from_rows(f, rows, n);
}

/// Particular solution v of v*m = target with all free variables zero, or
/// nullopt when the system is inconsistent.
inline std::optional<std::vector<Scalar>> solve_right(const Mat& m, const std::vector<Scalar>& target) {
  const Field& f = m.field();
  if (static_cast<int>(target.size()) != m.cols()) throw field_error("solve_right: target length mismatch");
  Mat t = m.transpose();  // cols(m) x rows(m)
  Mat rhs(f, m.cols(), 1);
  for (int i = 0; i < m.cols(); ++i) rhs.at(i, 0) = target[i];
  RrefResult rr = rref(t.hstack(rhs));
  int n = m.rows();
  std::vector<Scalar> v(n, Scalar::zero(f));
  for (size_t i = 0; i < rr.pivots.size(); ++i) {
    if (rr.pivots[i] == n) return std::nullopt;  // pivot in the augmented column
    v[rr.pivots[i]] = rr.reduced.at(static_cast<int>(i), n);
  }
  return v;
}

struct CokernelData {
  Mat projection;         // cols(m) x dim, kills the row space of m
  Mat section;            // dim x cols(m); section * projection == identity
  int dim = 0;            // complement dimension
  std::vector<int> kept;  // the non-pivot coordinates spanning the complement
};

/// Deterministic complement of the row space of m inside the ambient row
/// space k^cols(m): the non-pivot coordinates of rref(m).
inline CokernelData cokernel_data(const Mat& m) {
  const Field& f = m.field();
  RrefResult rr = rref(m);
  int n = m.cols();
  std::vector<int> piv_of_col(n, -1);
  for (size_t i = 0; i < rr.pivots.size(); ++i) piv_of_col[rr.pivots[i]] = static_cast<int>(i);
  CokernelData ck;
  for (int j = 0; j < n; ++j)
    if (piv_of_col[j] < 0) ck.kept.push_back(j);
  ck.dim = static_cast<int>(ck.kept.size());
  ck.projection = Mat(f, n, ck.dim);
  ck.section = Mat(f, ck.dim, n);
  for (int t = 0; t < ck.dim; ++t) {
    ck.section.at(t, ck.kept[t]) = Scalar::one(f);
    for (int j = 0; j < n; ++j) {
      if (piv_of_col[j] >= 0)
        ck.projection.at(j, t) = -rr.reduced.at(piv_of_col[j], ck.kept[t]);
      else if (j == ck.kept[t])
        ck.projection.at(j, t) = Scalar::one(f);
    }
  }
  return ck;
}

}  // namespace dgm

#endif
