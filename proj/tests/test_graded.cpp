#include <catch2/catch_amalgamated.hpp>

#include "dgm/graded.hpp"
#include "dgm/rng.hpp"

using namespace dgm;

static const Field Q = Field::rationals();

static GradedModule random_module(SplitMix64& rng, const Field& f, int lo, int hi, int max_rank,
                                  const std::string& tag) {
  std::map<int, std::vector<std::string>> basis;
  for (int z = lo; z <= hi; ++z) {
    int r = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_rank) + 1));
    for (int i = 0; i < r; ++i)
      basis[z].push_back(tag + std::to_string(z) + "_" + std::to_string(i));
  }
  return GradedModule(f, basis);
}

static HomMap random_hom(SplitMix64& rng, const GradedModule& s, const GradedModule& t, int deg) {
  HomMap h(s, t, deg);
  for (const auto& [z, b] : s.degrees()) {
    int cols = t.rank(z + deg);
    if (cols == 0) continue;
    Mat m(s.field(), s.rank(z), cols);
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < cols; ++j) m.at(i, j) = Scalar::from_int(s.field(), rng.int_in(-3, 3));
    h.set_block(z, m);
  }
  return h;
}

TEST_CASE("shift_module reindexes degrees") {
  GradedModule m = GradedModule::unit_at(Q, 0, "x");
  GradedModule s = shift_module(m, 1);
  CHECK(s.rank(-1) == 1);
  CHECK(s.rank(0) == 0);
  CHECK(shift_module(m, 0) == m);
  SplitMix64 rng(7);
  GradedModule v = random_module(rng, Q, -2, 2, 3, "v");
  CHECK(shift_module(shift_module(v, 2), -1) == shift_module(v, 1));
  CHECK(shift_module(shift_module(v, 1), -1) == v);
}

TEST_CASE("shift_map sign rule") {
  GradedModule a(Q, {{0, {"x"}}, {1, {"y"}}});
  HomMap f(a, a, 1);
  Mat c(Q, 1, 1);
  c.at(0, 0) = Scalar::from_int(Q, 5);
  f.set_block(0, c);
  SECTION("odd degree, odd shift flips the entry") {
    HomMap g = shift_map(f, 1);
    CHECK(g.entry(-1, 0, 0) == Scalar::from_int(Q, -5));
  }
  SECTION("even shift leaves entries") {
    HomMap g = shift_map(f, 2);
    CHECK(g.entry(-2, 0, 0) == Scalar::from_int(Q, 5));
  }
  SECTION("degree-0 maps never pick up signs") {
    HomMap h(a, a, 0);
    h.set_block(0, c);
    for (int s = -3; s <= 3; ++s) CHECK(shift_map(h, s).entry(-s, 0, 0) == Scalar::from_int(Q, 5));
  }
}

TEST_CASE("shift respects composition: (f.g)[a] = f[a].g[a]") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    GradedModule v = random_module(rng, Q, -2, 2, 2, "v");
    GradedModule x = random_module(rng, Q, -2, 2, 2, "x");
    GradedModule y = random_module(rng, Q, -2, 2, 2, "y");
    int df = static_cast<int>(rng.int_in(-2, 2)), dg = static_cast<int>(rng.int_in(-2, 2));
    HomMap f = random_hom(rng, v, x, df), g = random_hom(rng, x, y, dg);
    int a = static_cast<int>(rng.int_in(-3, 3));
    CHECK(shift_map(compose(f, g), a) == compose(shift_map(f, a), shift_map(g, a)));
  }
}

TEST_CASE("tensor unit law and symmetry") {
  GradedModule unit = GradedModule::unit_at(Q, 0, "1");
  SplitMix64 rng(13);
  GradedModule w = random_module(rng, Q, -2, 2, 2, "w");
  GradedModule uw = tensor(unit, w);
  for (int z = -3; z <= 3; ++z) CHECK(uw.rank(z) == w.rank(z));

  GradedModule a = GradedModule::unit_at(Q, 1, "a");
  GradedModule b = GradedModule::unit_at(Q, 1, "b");
  HomMap c = symmetry(a, b);
  CHECK(c.entry(2, 0, 0) == Scalar::from_int(Q, -1));

  // symmetry . symmetry = identity, degree-0 isomorphism
  for (int trial = 0; trial < 20; ++trial) {
    GradedModule v = random_module(rng, Q, -2, 2, 2, "v");
    GradedModule u = random_module(rng, Q, -2, 2, 2, "u");
    HomMap s = symmetry(v, u), s2 = symmetry(u, v);
    HomMap rt = compose(s, s2);
    CHECK(rt == HomMap::identity(tensor(v, u)));
  }
}

TEST_CASE("shift_absorb signs") {
  GradedModule v = GradedModule::unit_at(Q, 0, "v");
  GradedModule w = GradedModule::unit_at(Q, 1, "w");
  ShiftAbsorb ab = shift_absorb(v, w, 1);
  CHECK(ab.left_signed.entry(0, 0, 0) == Scalar::from_int(Q, -1));  // (-1)^{deg(w)*a}
  CHECK(ab.right_unsigned.entry(0, 0, 0) == Scalar::from_int(Q, 1));
}

TEST_CASE("graded naturality squares") {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    GradedModule v = random_module(rng, Q, -2, 2, 2, "v");
    GradedModule x = random_module(rng, Q, -2, 2, 2, "x");
    GradedModule w = random_module(rng, Q, -2, 2, 2, "w");
    GradedModule y = random_module(rng, Q, -2, 2, 2, "y");
    int df = static_cast<int>(rng.int_in(-2, 2)), dg = static_cast<int>(rng.int_in(-2, 2));
    HomMap f = random_hom(rng, v, x, df), g = random_hom(rng, w, y, dg);
    int a = static_cast<int>(rng.int_in(-3, 3));

    ShiftAbsorb top = shift_absorb(v, w, a);
    ShiftAbsorb bot = shift_absorb(x, y, a);
    HomMap mid = shift_map(tensor_map(f, g), a);
    CHECK(compose(top.left_signed, tensor_map(shift_map(f, a), g)) == compose(mid, bot.left_signed));
    CHECK(compose(top.right_unsigned, tensor_map(f, shift_map(g, a))) ==
          compose(mid, bot.right_unsigned));
  }
}

TEST_CASE("shift_absorb maps are degree-0 isomorphisms") {
  SplitMix64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    GradedModule v = random_module(rng, Q, -1, 1, 2, "v");
    GradedModule w = random_module(rng, Q, -1, 1, 2, "w");
    int a = static_cast<int>(rng.int_in(-2, 2));
    ShiftAbsorb ab = shift_absorb(v, w, a);
    GradedModule src = shift_module(tensor(v, w), a);
    for (const auto& [z, b] : src.degrees()) {
      CHECK(rank(ab.left_signed.block(z)) == static_cast<int>(b.size()));
      CHECK(rank(ab.right_unsigned.block(z)) == static_cast<int>(b.size()));
    }
  }
}

TEST_CASE("tensor field mismatch rejected") {
  GradedModule a = GradedModule::unit_at(Q, 0, "a");
  GradedModule b = GradedModule::unit_at(Field::prime(5), 0, "b");
  CHECK_THROWS_AS(tensor(a, b), field_error);
}
