#include <catch2/catch_amalgamated.hpp>

#include "dgm/matrix.hpp"
#include "dgm/rng.hpp"

using namespace dgm;

static const Field Q = Field::rationals();
static const Field F5 = Field::prime(5);

TEST_CASE("scalar arithmetic over Q") {
  Scalar a = Scalar::from_rational(Q, Rational(1, 3));
  Scalar b = Scalar::from_rational(Q, Rational(1, 6));
  CHECK((a + b) == Scalar::from_rational(Q, Rational(1, 2)));
  CHECK((a * b) == Scalar::from_rational(Q, Rational(1, 18)));
  CHECK(a.inverse() == Scalar::from_int(Q, 3));
  CHECK((a - a).is_zero());
}

TEST_CASE("scalar arithmetic over F5") {
  Scalar a = Scalar::from_int(F5, 3);
  Scalar b = Scalar::from_int(F5, 4);
  CHECK((a + b) == Scalar::from_int(F5, 2));
  CHECK((a * b) == Scalar::from_int(F5, 2));
  CHECK((a.inverse() * a).is_one());
  CHECK(Scalar::from_int(F5, -1) == Scalar::from_int(F5, 4));
}

TEST_CASE("non-prime modulus rejected") {
  CHECK_THROWS_AS(Field::prime(6), field_error);
  CHECK_THROWS_AS(Field::prime(1), field_error);
  CHECK_NOTHROW(Field::prime(2));
}

TEST_CASE("graded field monomials") {
  Field G = Field::graded(5, 2);
  Scalar u2 = Scalar::monomial(G, Scalar::from_int(G, 3), 2);
  Scalar u2b = Scalar::monomial(G, Scalar::from_int(G, 4), 2);
  Scalar um1 = Scalar::monomial(G, Scalar::from_int(G, 2), -1);
  CHECK((u2 + u2b) == Scalar::monomial(G, Scalar::from_int(G, 2), 2));
  CHECK((u2 * um1).u_exponent() == 1);
  CHECK((u2 * u2.inverse()).is_one());
  CHECK_THROWS_AS(u2 + um1, field_error);
  CHECK_THROWS_AS(Field::graded(5, 3), field_error);
  CHECK_NOTHROW(Field::graded(2, 3));
  // zero is canonical: exponent resets
  CHECK((u2 - u2).u_exponent() == 0);
}

TEST_CASE("rref examples") {
  SECTION("rank-1 over Q") {
    Mat m = Mat::from_ints(Q, {{1, 2}, {2, 4}});
    RrefResult r = rref(m);
    CHECK(r.reduced == Mat::from_ints(Q, {{1, 2}, {0, 0}}));
    CHECK(r.pivots == std::vector<int>{0});
    CHECK(r.row_ops * m == r.reduced);
  }
  SECTION("identity") {
    Mat m = Mat::identity(Q, 4);
    RrefResult r = rref(m);
    CHECK(r.reduced == m);
    CHECK(r.pivots == std::vector<int>{0, 1, 2, 3});
  }
  SECTION("zero") {
    Mat m(Q, 1, 1);
    RrefResult r = rref(m);
    CHECK(r.reduced == m);
    CHECK(r.pivots.empty());
  }
}

TEST_CASE("kernel basis examples") {
  SECTION("diagonal embedding") {
    Mat m = Mat::from_ints(Q, {{1}, {1}});
    Mat k = kernel_basis(m);
    CHECK(k == Mat::from_ints(Q, {{1, -1}}));
  }
  SECTION("zero map") {
    Mat m(Q, 2, 3);
    CHECK(kernel_basis(m) == Mat::identity(Q, 2));
  }
  SECTION("invertible") {
    Mat m = Mat::from_ints(Q, {{1, 1}, {0, 1}});
    CHECK(kernel_basis(m).rows() == 0);
  }
}

TEST_CASE("solve_right examples") {
  Mat m = Mat::from_ints(Q, {{1, 0}});
  auto v = solve_right(m, {Scalar::from_int(Q, 5), Scalar::zero(Q)});
  REQUIRE(v);
  CHECK((*v)[0] == Scalar::from_int(Q, 5));
  CHECK_FALSE(solve_right(m, {Scalar::zero(Q), Scalar::from_int(Q, 1)}));
  Mat id = Mat::identity(Q, 3);
  std::vector<Scalar> t{Scalar::from_int(Q, 1), Scalar::from_int(Q, -2), Scalar::from_int(Q, 7)};
  auto w = solve_right(id, t);
  REQUIRE(w);
  CHECK(*w == t);
}

TEST_CASE("cokernel examples") {
  SECTION("surjective") { CHECK(cokernel_data(Mat::identity(Q, 3)).dim == 0); }
  SECTION("zero 1x2") {
    CokernelData ck = cokernel_data(Mat(Q, 1, 2));
    CHECK(ck.dim == 2);
    CHECK(ck.projection == Mat::identity(Q, 2));
  }
  SECTION("rank-nullity 1x2") {
    CokernelData ck = cokernel_data(Mat::from_ints(Q, {{1, 1}}));
    CHECK(ck.dim == 1);
    CHECK(ck.section * ck.projection == Mat::identity(Q, 1));
  }
}

static Mat random_mat(SplitMix64& rng, const Field& f, int rows, int cols) {
  Mat m(f, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.at(i, j) = Scalar::from_int(f, static_cast<long long>(rng.below(7)) - 3);
  return m;
}

TEST_CASE("linear algebra properties on random matrices") {
  SplitMix64 rng(42);
  for (const Field& f : {Q, F5, Field::graded(5, 2)}) {
    for (int trial = 0; trial < 60; ++trial) {
      int rows = 1 + static_cast<int>(rng.below(5));
      int cols = 1 + static_cast<int>(rng.below(5));
      Mat m = random_mat(rng, f, rows, cols);

      // rank-nullity and exact kernel membership
      Mat k = kernel_basis(m);
      CHECK(k.rows() + rank(m) == rows);
      for (int i = 0; i < k.rows(); ++i) {
        auto prod = row_times(k.row(i), m);
        for (const auto& s : prod) CHECK(s.is_zero());
      }

      // solve_right on a consistent target
      Mat v = random_mat(rng, f, 1, rows);
      auto target = row_times(v.row(0), m);
      auto w = solve_right(m, target);
      REQUIRE(w);
      CHECK(row_times(*w, m) == target);

      // cokernel identities
      CokernelData ck = cokernel_data(m);
      CHECK(ck.section * ck.projection == Mat::identity(f, ck.dim));
      CHECK(rank(ck.projection) == ck.dim);
      CHECK((m * ck.projection).is_zero());

      // row-op record replays to an invertible transformation
      RrefResult rr = rref(m);
      CHECK(rr.row_ops * m == rr.reduced);
      CHECK(rank(rr.row_ops) == rows);
    }
  }
}
