#ifndef DGM_SCALAR_HPP
#define DGM_SCALAR_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace dgm {

using Rational = boost::multiprecision::cpp_rational;

struct field_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool is_prime_u32(std::uint32_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

enum class FieldKind : std::uint8_t { Rational, Prime, Graded };

/// Coefficient field descriptor: Q, F_p, or the graded field F[u,u^-1]
/// with F = Q (p == 0) or F_p.  deg u must be even unless p == 2, so
/// graded commutativity holds without signs.
struct Field {
  FieldKind kind = FieldKind::Rational;
  std::uint32_t p = 0;
  int deg_u = 0;

  static Field rationals() { return Field{}; }

  static Field prime(std::uint32_t p) {
    if (!is_prime_u32(p)) throw field_error("modulus is not prime: " + std::to_string(p));
    return Field{FieldKind::Prime, p, 0};
  }

  static Field graded(std::uint32_t p, int deg_u) {
    if (p != 0 && !is_prime_u32(p))
      throw field_error("graded base modulus is not prime: " + std::to_string(p));
    if (deg_u == 0) throw field_error("deg u must be nonzero");
    if (deg_u % 2 != 0 && p != 2) throw field_error("deg u must be even unless p = 2");
    return Field{FieldKind::Graded, p, deg_u};
  }

  bool prime_based() const { return p != 0; }

  friend bool operator==(const Field& a, const Field& b) {
    return a.kind == b.kind && a.p == b.p && a.deg_u == b.deg_u;
  }
  friend bool operator!=(const Field& a, const Field& b) { return !(a == b); }

  std::string str() const {
    switch (kind) {
      case FieldKind::Rational: return "Q";
      case FieldKind::Prime: return "F" + std::to_string(p);
      case FieldKind::Graded:
        return (p == 0 ? std::string("Q") : "F" + std::to_string(p)) + "[u,u^-1],deg u=" +
               std::to_string(deg_u);
    }
    return "?";
  }
};

/// Exact field element.  Rationals are kept in lowest terms with positive
/// denominator (cpp_rational does this), prime residues in [0,p), graded
/// scalars are monomials c*u^m with c != 0 unless the scalar is zero.
class Scalar {
 public:
  Scalar() = default;
  explicit Scalar(const Field& f) : f_(f) {}

  static Scalar zero(const Field& f) { return Scalar(f); }

  static Scalar one(const Field& f) { return from_int(f, 1); }

  static Scalar from_int(const Field& f, long long n) {
    Scalar s(f);
    if (f.prime_based()) {
      long long r = n % static_cast<long long>(f.p);
      if (r < 0) r += f.p;
      s.r_ = static_cast<std::uint64_t>(r);
    } else {
      s.q_ = n;
    }
    return s;
  }

  static Scalar from_rational(const Field& f, const Rational& q) {
    if (f.prime_based()) {
      // reduce a/b mod p
      Scalar num = from_int(f, 0), den = from_int(f, 0);
      num.r_ = mod_big(boost::multiprecision::numerator(q), f.p);
      den.r_ = mod_big(boost::multiprecision::denominator(q), f.p);
      if (den.r_ == 0) throw field_error("denominator divisible by p");
      return num * den.inverse();
    }
    Scalar s(f);
    s.q_ = q;
    return s;
  }

  /// c * u^m over a graded field (m ignored for zero c).
  static Scalar monomial(const Field& f, const Scalar& coeff, int m) {
    if (f.kind != FieldKind::Graded) throw field_error("monomial needs a graded field");
    Scalar s = coeff;
    s.f_ = f;
    s.m_ = s.is_zero() ? 0 : m;
    return s;
  }

  const Field& field() const { return f_; }
  int u_exponent() const { return m_; }
  const Rational& rational_value() const { return q_; }
  std::uint64_t residue() const { return r_; }

  bool is_zero() const { return f_.prime_based() ? r_ == 0 : q_.is_zero(); }
  bool is_one() const { return m_ == 0 && (f_.prime_based() ? r_ == 1 : q_ == 1); }

  Scalar operator-() const {
    Scalar s = *this;
    if (f_.prime_based()) {
      if (s.r_ != 0) s.r_ = f_.p - s.r_;
    } else {
      s.q_ = -s.q_;
    }
    return s;
  }

  Scalar operator+(const Scalar& o) const {
    check_same(o);
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (m_ != o.m_) throw field_error("adding graded monomials of different u-exponent");
    Scalar s = *this;
    if (f_.prime_based())
      s.r_ = (r_ + o.r_) % f_.p;
    else
      s.q_ = q_ + o.q_;
    if (s.is_zero()) s.m_ = 0;
    return s;
  }

  Scalar operator-(const Scalar& o) const { return *this + (-o); }

  Scalar operator*(const Scalar& o) const {
    check_same(o);
    Scalar s(f_);
    if (f_.prime_based())
      s.r_ = (static_cast<unsigned __int128>(r_) * o.r_) % f_.p;
    else
      s.q_ = q_ * o.q_;
    s.m_ = s.is_zero() ? 0 : m_ + o.m_;
    return s;
  }

  Scalar inverse() const {
    if (is_zero()) throw field_error("inverse of zero");
    Scalar s(f_);
    if (f_.prime_based())
      s.r_ = inv_mod(r_, f_.p);
    else
      s.q_ = 1 / q_;
    s.m_ = -m_;
    return s;
  }

  Scalar operator/(const Scalar& o) const { return *this * o.inverse(); }

  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    a.check_same(b);
    if (a.f_.prime_based()) return a.r_ == b.r_ && a.m_ == b.m_;
    return a.q_ == b.q_ && a.m_ == b.m_;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  std::string str() const {
    std::ostringstream os;
    if (f_.prime_based())
      os << r_;
    else
      os << q_;
    if (m_ != 0) os << "*u^" << m_;
    return os.str();
  }

 private:
  void check_same(const Scalar& o) const {
    if (f_ != o.f_) throw field_error("field mismatch: " + f_.str() + " vs " + o.f_.str());
  }

  static std::uint64_t mod_big(const boost::multiprecision::cpp_int& n, std::uint32_t p) {
    boost::multiprecision::cpp_int r = n % p;
    if (r < 0) r += p;
    return r.convert_to<std::uint64_t>();
  }

  static std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
    // extended Euclid; p prime, a in (0,p)
    std::int64_t t = 0, nt = 1;
    std::int64_t r = static_cast<std::int64_t>(p), nr = static_cast<std::int64_t>(a);
    while (nr != 0) {
      std::int64_t q = r / nr;
      std::int64_t tmp = t - q * nt;
      t = nt;
      nt = tmp;
      tmp = r - q * nr;
      r = nr;
      nr = tmp;
    }
    if (t < 0) t += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t);
  }

  Field f_{};
  Rational q_{};
  std::uint64_t r_ = 0;
  int m_ = 0;
};

}  // namespace dgm

#endif
