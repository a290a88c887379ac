#include <algorithm>
#include <set>

#include "doctest.h"
#include "ffgeom/energy.hpp"
#include "ffgeom/experiments.hpp"
#include "ffgeom/incidence.hpp"

using namespace ffgeom;

namespace {

PointSet2 unit_square(u64 p) {
  return PointSet2(PrimeModulus(p), {{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

GeneratorSpec random_spec(u64 p, u64 n, u64 seed) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::Random;
  spec.p = p;
  spec.n = n;
  spec.seed = seed;
  return spec;
}

// x -> Mx + t with M^T M = I; rectangle counts are invariant under such maps.
PointSet2 apply_orthogonal(const PointSet2& A, Vec2 col1, Vec2 t, bool reflect) {
  const PrimeModulus& m = A.modulus();
  std::vector<Vec2> out;
  for (const Vec2& pt : A.points()) {
    u64 x, y;
    if (!reflect) {
      // columns (a,b), (-b,a)
      x = m.add(m.mul(col1.x, pt.x), m.mul(m.neg(col1.y), pt.y));
      y = m.add(m.mul(col1.y, pt.x), m.mul(col1.x, pt.y));
    } else {
      // columns (a,b), (b,-a)
      x = m.add(m.mul(col1.x, pt.x), m.mul(col1.y, pt.y));
      y = m.add(m.mul(col1.y, pt.x), m.mul(m.neg(col1.x), pt.y));
    }
    out.push_back(vadd(m, {static_cast<u32>(x), static_cast<u32>(y)}, t));
  }
  return PointSet2(m, std::move(out));
}

}  // namespace

TEST_SUITE_BEGIN("incidence");

TEST_CASE("corner oracle on tiny sets") {
  PrimeModulus m(7);
  CHECK(count_corners_oracle(PointSet2(m, {})) == 0);
  CHECK(count_corners_oracle(PointSet2(m, {{1, 2}})) == 0);
  CHECK(count_corners_oracle(PointSet2(m, {{1, 2}, {3, 4}})) == 0);
  CHECK(count_corners_oracle(unit_square(7)) == 8);
}

TEST_CASE("corner count of the full plane is p^2 (p^2-1)(p-1) for p = 3 mod 4") {
  PointSet2 plane3 = PointSet2::full_plane(PrimeModulus(3));
  CHECK(count_corners_oracle(plane3) == 144);
  CHECK(count_corners_fast(plane3) == 144);
}

TEST_CASE("fast corner kernel equals the oracle on random sets") {
  for (u64 p : {7ull, 11ull, 13ull}) {
    for (u64 seed = 1; seed <= 17; ++seed) {
      PointSet2 A = generate_planar(random_spec(p, 4 + seed % 29, seed));
      CAPTURE(p);
      CAPTURE(seed);
      CHECK(count_corners_fast(A) == count_corners_oracle(A));
      CHECK(count_corners_fast(A, 4) == count_corners_oracle(A));
    }
  }
}

TEST_CASE("fast corner kernel reports skipped isotropic pairs") {
  // five points on an isotropic line contribute no corners, C(5,2) skips
  GeneratorSpec spec;
  spec.kind = GeneratorKind::IsotropicLine;
  spec.p = 5;
  spec.n = 5;
  spec.seed = 2;
  PointSet2 A = generate_planar(spec);
  auto r = count_corners_fast_detailed(A);
  CHECK(r.corners == 0);
  CHECK(r.corners == count_corners_oracle(A));
  CHECK(r.isotropic_pairs_skipped == 10);
}

TEST_CASE("rectangle oracle on small sets") {
  PrimeModulus m(7);
  CHECK(count_rectangles_oracle(PointSet2(m, {{0, 0}, {1, 0}, {1, 1}})) == 0);
  CHECK(count_rectangles_oracle(unit_square(7)) == 8);
  // full 3x3 plane: 2 perpendicular direction pairs, C(3,2)^2 line choices each
  PointSet2 plane3 = PointSet2::full_plane(PrimeModulus(3));
  CHECK(count_rectangles_oracle(plane3) == 144);
}

TEST_CASE("three rectangle counting routes agree") {
  CHECK(count_rectangles_fast(unit_square(7)) == 8);
  CHECK(count_rectangles_via_energy(unit_square(7)) == 8);
  for (u64 p : {7ull, 11ull, 13ull}) {
    for (u64 seed = 1; seed <= 12; ++seed) {
      PointSet2 A = generate_planar(random_spec(p, 4 + seed % 21, seed * 31));
      CAPTURE(p);
      CAPTURE(seed);
      u64 oracle = count_rectangles_oracle(A);
      CHECK(count_rectangles_fast(A) == oracle);
      CHECK(count_rectangles_via_energy(A) == oracle);
      CHECK(count_rectangles_via_energy(A, 3) == oracle);
      CHECK(oracle % 8 == 0);
    }
  }
}

TEST_CASE("rectangles via energy handle isotropic-line mass, p = 1 mod 4") {
  // points concentrated on isotropic lines exercise the collinear residue
  for (u64 seed = 1; seed <= 8; ++seed) {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::IsotropicLine;
    spec.p = 13;
    spec.n = 6 + seed % 7;
    spec.seed = seed;
    PointSet2 line_pts = generate_planar(spec);
    std::vector<Vec2> merged = line_pts.points();
    PointSet2 extra = generate_planar(random_spec(13, 10, seed + 100));
    merged.insert(merged.end(), extra.points().begin(), extra.points().end());
    PointSet2 A(PrimeModulus(13), merged, PointSet2::OnDuplicate::Merge);
    CAPTURE(seed);
    CHECK(count_rectangles_via_energy(A) == count_rectangles_oracle(A));
  }
}

TEST_CASE("rectangle count is invariant under orthogonal affine maps") {
  PrimeModulus m(11);
  PointSet2 A = generate_planar(random_spec(11, 18, 5));
  u64 base = count_rectangles_fast(A);
  // (a,b) with a² + b² = 1 mod 11: e.g. (0,1), (5, 3)? 25+9=34=1 mod 11
  CHECK(m.add(m.mul(5, 5), m.mul(3, 3)) == 1);
  for (bool reflect : {false, true}) {
    CHECK(count_rectangles_fast(apply_orthogonal(A, {0, 1}, {4, 9}, reflect)) == base);
    CHECK(count_rectangles_fast(apply_orthogonal(A, {5, 3}, {2, 7}, reflect)) == base);
  }
}

TEST_CASE("incidences") {
  PrimeModulus m3(3);
  PointSet2 plane3 = PointSet2::full_plane(m3);
  auto lines = all_lines(m3);
  CHECK(lines.size() == 12);
  CHECK(incidences(plane3, lines) == 36);
  CHECK(incidences(plane3, std::span<const AffineLine>{}) == 0);

  PrimeModulus m7(7);
  AffineLine l = AffineLine::through_direction(m7, {0, 0}, {1, 3});
  auto pts = l.points(m7);
  PointSet2 collinear(m7, {pts[0], pts[1], pts[2], pts[3], pts[4]});
  std::vector<AffineLine> just_l{l};
  CHECK(incidences(collinear, just_l) == 5);
}

TEST_CASE("multiplicity table pair identity") {
  for (u64 seed = 1; seed <= 10; ++seed) {
    PointSet2 A = generate_planar(random_spec(11, 6 + seed * 2, seed));
    MultiplicityTable table = MultiplicityTable::build(A);
    u64 n = A.size();
    CHECK(table.pair_mass() == n * (n - 1) / 2);
  }
}

TEST_CASE("rich lines") {
  PrimeModulus m7(7);
  AffineLine l = AffineLine::through_direction(m7, {1, 2}, {1, 1});
  auto pts = l.points(m7);
  PointSet2 on_line(m7, {pts[0], pts[1], pts[2], pts[3]});
  auto rich = rich_lines(on_line, 4);
  REQUIRE(rich.size() == 1);
  CHECK(rich[0] == l);
  CHECK(rich_lines(on_line, 5).empty());
  CHECK_THROWS_AS(rich_lines(on_line, 1), PreconditionError);

  PointSet2 plane3 = PointSet2::full_plane(PrimeModulus(3));
  CHECK(rich_lines(plane3, 3).size() == 12);
}

TEST_CASE("dyadic histogram partitions stored lines") {
  for (u64 seed : {1ull, 2ull, 3ull}) {
    PointSet2 A = generate_planar(random_spec(11, 30, seed));
    MultiplicityTable table = MultiplicityTable::build(A);
    RichLineHistogram h = dyadic_histogram(table);
    CHECK(h.total_lines == table.stored_lines());
    u64 sum = 0;
    for (auto [k, c] : h.classes) sum += c;
    CHECK(sum == h.total_lines);
  }
}

TEST_CASE("incidence bound reports") {
  PrimeModulus m3(3);
  PointSet2 plane3 = PointSet2::full_plane(m3);
  auto lines = all_lines(m3);
  auto reports = verify_incidence_bounds(plane3, lines);
  const BoundReport* vinh = nullptr;
  for (const auto& r : reports)
    if (r.bound_id == "vinh") vinh = &r;
  REQUIRE(vinh != nullptr);
  CHECK(vinh->measured == doctest::Approx(36.0));
  CHECK(vinh->bound_value == doctest::Approx(54.0));
  CHECK(vinh->ratio == doctest::Approx(2.0 / 3.0));

  // empty line family: all measured values zero
  auto empty_reports = verify_incidence_bounds(plane3, std::span<const AffineLine>{});
  for (const auto& r : empty_reports) {
    CHECK(r.measured == 0.0);
    CHECK(r.ratio == 0.0);
  }
}

TEST_CASE("product bound hypothesis check") {
  PrimeModulus m(13);
  GeneratorSpec spec;
  spec.kind = GeneratorKind::CartesianProduct;
  spec.p = 13;
  spec.n = 6;
  spec.n2 = 6;
  spec.seed = 4;
  PointSet2 A = generate_planar(spec);
  REQUIRE(A.size() == 36);

  // recover the factors from the set itself
  ProductStructure prod;
  {
    std::set<u32> xs, ys;
    for (const Vec2& pt : A.points()) {
      xs.insert(pt.x);
      ys.insert(pt.y);
    }
    prod.xs.assign(xs.begin(), xs.end());
    prod.ys.assign(ys.begin(), ys.end());
  }

  SplitMix64 rng(9);
  std::vector<AffineLine> lines;
  while (lines.size() < 20) {
    Vec2 a{static_cast<u32>(rng.below(13)), static_cast<u32>(rng.below(13))};
    Vec2 b{static_cast<u32>(rng.below(13)), static_cast<u32>(rng.below(13))};
    if (a == b) continue;
    AffineLine l = line_through(m, a, b);
    if (std::find(lines.begin(), lines.end(), l) == lines.end()) lines.push_back(l);
  }
  auto reports = verify_incidence_bounds(A, lines, &prod);
  const BoundReport* product = nullptr;
  for (const auto& r : reports)
    if (r.bound_id == "product") product = &r;
  REQUIRE(product != nullptr);
  CHECK(product->hypothesis_ok == (6.0 * 20.0 <= 169.0));
  CHECK(product->bound_value ==
        doctest::Approx(std::pow(6.0, 0.75) * std::sqrt(6.0) * std::pow(20.0, 0.75) + 20.0));
  CHECK(product->measured == static_cast<double>(incidences(A, lines)));
}

TEST_CASE("sumset of two lines") {
  PrimeModulus m7(7);
  AffineLine x_axis = line_through(m7, {0, 0}, {1, 0});
  AffineLine y_axis = line_through(m7, {0, 0}, {0, 1});
  std::vector<Vec2> A{{0, 0}, {1, 0}, {2, 0}};
  std::vector<Vec2> B{{0, 0}, {0, 1}, {0, 2}};
  PointSet2 S = sumset_of_two_lines(m7, x_axis, A, y_axis, B);
  CHECK(S.size() == 9);
  for (u32 x = 0; x < 3; ++x)
    for (u32 y = 0; y < 3; ++y) CHECK(S.contains({x, y}));

  // slanted non-parallel lines over p = 11
  PrimeModulus m11(11);
  AffineLine la = AffineLine::through_direction(m11, {1, 1}, {1, 3});
  AffineLine lb = AffineLine::through_direction(m11, {0, 5}, {1, 7});
  auto pa = la.points(m11);
  auto pb = lb.points(m11);
  std::vector<Vec2> A2(pa.begin(), pa.begin() + 4), B2(pb.begin(), pb.begin() + 4);
  CHECK(sumset_of_two_lines(m11, la, A2, lb, B2).size() == 16);

  CHECK_THROWS_AS(sumset_of_two_lines(m7, x_axis, A, x_axis.parallel_through(m7, {0, 3}), A),
                  PreconditionError);
  std::vector<Vec2> off{{1, 1}};
  CHECK_THROWS_AS(sumset_of_two_lines(m7, x_axis, off, y_axis, B), PreconditionError);
}

TEST_CASE("additive energy kernels agree") {
  PrimeModulus m(7);
  CHECK(additive_energy(m, std::vector<Vec3>{{1, 2, 3}}) == 1);
  CHECK(additive_energy(m, std::vector<Vec3>{{1, 2, 3}, {4, 5, 6}}) == 6);
  for (u64 p : {7ull, 11ull, 13ull}) {
    for (u64 seed = 1; seed <= 10; ++seed) {
      GeneratorSpec spec;
      spec.kind = GeneratorKind::SpaceRandom;
      spec.p = p;
      spec.n = 4 + seed % 17;
      spec.seed = seed;
      auto pts = generate_space(spec);
      PrimeModulus mod(p);
      u64 fast = additive_energy(mod, pts);
      CAPTURE(p);
      CAPTURE(seed);
      CHECK(fast == additive_energy_oracle(mod, pts));
      CHECK(fast == additive_energy(mod, pts, 4));
      CHECK(fast >= trivial_energy(pts.size()));
    }
  }
}

TEST_SUITE_END();
