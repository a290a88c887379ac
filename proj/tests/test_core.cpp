#include <complex>
#include <set>

#include "doctest.h"
#include "ffgeom/core.hpp"
#include "ffgeom/experiments.hpp"

using namespace ffgeom;

TEST_SUITE_BEGIN("core");

TEST_CASE("modulus construction accepts odd primes only") {
  CHECK_NOTHROW(PrimeModulus(3));
  CHECK_NOTHROW(PrimeModulus(32003));
  CHECK_THROWS_AS(PrimeModulus(1), PreconditionError);
  CHECK_THROWS_AS(PrimeModulus(2), PreconditionError);
  CHECK_THROWS_AS(PrimeModulus(9), PreconditionError);
  CHECK_THROWS_AS(PrimeModulus(32001), PreconditionError);  // 3 * 10667
}

TEST_CASE("minus one square iff p = 1 mod 4") {
  CHECK_FALSE(PrimeModulus(7).minus_one_is_square());
  CHECK(PrimeModulus(13).minus_one_is_square());
  CHECK_FALSE(PrimeModulus(3).minus_one_is_square());
  CHECK(PrimeModulus(5).minus_one_is_square());

  PrimeModulus m13(13);
  auto t = m13.sqrt_minus_one();
  REQUIRE(t.has_value());
  CHECK(*t == 5);  // 25 = 26 - 1
  CHECK(m13.mul(*t, *t) == 12);
  CHECK_FALSE(PrimeModulus(7).sqrt_minus_one().has_value());
}

TEST_CASE("field arithmetic basics") {
  PrimeModulus m(11);
  CHECK(m.add(7, 8) == 4);
  CHECK(m.sub(3, 9) == 5);
  CHECK(m.mul(6, 7) == 9);
  CHECK(m.inv(3) == 4);
  CHECK(m.mul(m.inv(9), 9) == 1);
  CHECK_THROWS_AS(m.inv(0), PreconditionError);
}

TEST_CASE("isotropic directions") {
  PrimeModulus m5(5);
  CHECK(is_isotropic(m5, {1, 2}));  // 1 + 4 = 0 mod 5
  PrimeModulus m7(7);
  for (u32 t = 0; t < 7; ++t) CHECK_FALSE(is_isotropic(m7, {1, t}));
  CHECK_FALSE(is_isotropic(m7, {0, 1}));
  PrimeModulus m13(13);
  CHECK(is_isotropic(m13, {1, 5}));  // 1 + 25 = 26 = 0 mod 13
  CHECK_THROWS_AS(is_isotropic(m5, {0, 0}), PreconditionError);
}

TEST_CASE("nonzero isotropic solutions exist iff -1 is a square, p <= 31") {
  for (u64 p : {3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull}) {
    PrimeModulus m(p);
    bool found = false;
    for (u32 x = 0; x < p && !found; ++x)
      for (u32 y = 0; y < p && !found; ++y) {
        if (x == 0 && y == 0) continue;
        if (dot(m, Vec2{x, y}, Vec2{x, y}) == 0) found = true;
      }
    CHECK(found == m.minus_one_is_square());
  }
}

TEST_CASE("line through two points, canonical form") {
  PrimeModulus m(7);
  AffineLine x_axis = line_through(m, {0, 0}, {1, 0});
  CHECK(x_axis.a() == 0);
  CHECK(x_axis.b() == 1);
  CHECK(x_axis.c() == 0);
  AffineLine y_axis = line_through(m, {0, 0}, {0, 1});
  CHECK(y_axis.a() == 1);
  CHECK(y_axis.b() == 0);
  CHECK(y_axis.c() == 0);
  AffineLine l = line_through(m, {1, 1}, {2, 3});
  CHECK(l.direction(m) == Vec2{1, 2});
  CHECK(l.contains(m, {1, 1}));
  CHECK(l.contains(m, {2, 3}));
  CHECK_THROWS_AS(line_through(m, {1, 1}, {1, 1}), PreconditionError);
}

TEST_CASE("line canonicalization is pair independent") {
  PrimeModulus m(13);
  SplitMix64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Vec2 p1{static_cast<u32>(rng.below(13)), static_cast<u32>(rng.below(13))};
    Vec2 p2{static_cast<u32>(rng.below(13)), static_cast<u32>(rng.below(13))};
    if (p1 == p2) continue;
    AffineLine l = line_through(m, p1, p2);
    auto pts = l.points(m);
    CHECK(pts.size() == 13);
    std::set<Vec2> unique_pts(pts.begin(), pts.end());
    CHECK(unique_pts.size() == 13);
    // any other point pair on the line reproduces the identical triple
    for (std::size_t i = 0; i < pts.size(); i += 3)
      for (std::size_t j = i + 1; j < pts.size(); j += 2) {
        AffineLine l2 = line_through(m, pts[i], pts[j]);
        CHECK(l2 == l);
      }
  }
}

TEST_CASE("perpendicular line") {
  PrimeModulus m7(7);
  AffineLine x_axis = line_through(m7, {0, 0}, {1, 0});
  AffineLine perp = perpendicular_at(m7, x_axis, {0, 0});
  CHECK(perp == line_through(m7, {0, 0}, {0, 1}));

  AffineLine l = AffineLine::through_direction(m7, {3, 3}, {1, 2});
  AffineLine pl = perpendicular_at(m7, l, {3, 3});
  CHECK(pl.contains(m7, {3, 3}));
  CHECK(dot(m7, l.direction(m7), pl.direction(m7)) == 0);
  // direction (-2,1) ~ canonical (1, -1/2) = (1, 3) over F_7
  CHECK(pl.direction(m7) == canonical_direction(m7, {static_cast<u32>(m7.neg(2)), 1}));

  PrimeModulus m5(5);
  AffineLine iso = AffineLine::through_direction(m5, {0, 0}, {1, 2});
  CHECK_THROWS_AS(perpendicular_at(m5, iso, {0, 0}), PreconditionError);
}

TEST_CASE("perpendicularity is an involution on directions") {
  for (u64 p : {7ull, 11ull, 13ull}) {
    PrimeModulus m(p);
    for (u32 t = 0; t <= p; ++t) {
      Vec2 d = t < p ? Vec2{1, t} : Vec2{0, 1};
      if (is_isotropic(m, d)) continue;
      AffineLine l = AffineLine::through_direction(m, {2, 3}, d);
      AffineLine back = perpendicular_at(m, perpendicular_at(m, l, {2, 3}), {2, 3});
      CHECK(back.direction(m) == l.direction(m));
    }
  }
}

TEST_CASE("additive character") {
  PrimeModulus m5(5);
  CHECK(std::abs(additive_character(m5, 0) - cplx{1.0, 0.0}) < 1e-12);
  CHECK(std::abs(additive_character(m5, 1) * additive_character(m5, 4) - cplx{1.0, 0.0}) <
        1e-12);
  // orthogonality: sum over the field of e(a x) vanishes for a != 0
  for (u64 p : {5ull, 7ull, 31ull, 101ull}) {
    PrimeModulus m(p);
    CharacterTable e(m);
    for (u64 a = 0; a < p; a += (p > 11 ? 7 : 1)) {
      cplx acc{0, 0};
      for (u64 x = 0; x < p; ++x) acc += e((a * x) % p);
      if (a == 0)
        CHECK(std::abs(acc - cplx{static_cast<double>(p), 0}) < 1e-9);
      else
        CHECK(std::abs(acc) < 1e-9);
    }
  }
}

TEST_CASE("all_lines enumerates p(p+1) distinct lines with p points each") {
  PrimeModulus m(5);
  auto lines = all_lines(m);
  CHECK(lines.size() == 30);
  std::set<AffineLine> unique_lines(lines.begin(), lines.end());
  CHECK(unique_lines.size() == 30);
}

TEST_CASE("direction table matches canonical directions") {
  PrimeModulus m(13);
  DirectionTable dirs(m);
  CHECK(dirs.count() == 14);
  SplitMix64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    Vec2 a{static_cast<u32>(rng.below(13)), static_cast<u32>(rng.below(13))};
    Vec2 b{static_cast<u32>(rng.below(13)), static_cast<u32>(rng.below(13))};
    if (a == b) continue;
    u32 idx = dirs.index_of_diff(a, b);
    CHECK(dirs.direction(idx) == canonical_direction(m, vsub(m, a, b)));
    u32 q = dirs.perp(idx);
    CHECK(dot(m, dirs.direction(idx), dirs.direction(q)) == 0);
    CHECK(dirs.perp(q) == idx);
    CHECK(dirs.isotropic(idx) == is_isotropic(m, vsub(m, a, b)));
  }
}

TEST_SUITE_END();
