#include "ffgeom/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ffgeom/energy.hpp"

namespace ffgeom {

namespace {

inline bool corner_at(const PrimeModulus& m, Vec2 x0, Vec2 x1, Vec2 x2) {
  Vec2 d1 = vsub(m, x1, x0);
  Vec2 d2 = vsub(m, x2, x1);
  return dot(m, d1, d2) == 0 && cross(m, d1, d2) != 0;
}

u64 isqrt_u64(u64 v) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

}  // namespace

u64 count_corners_oracle(const PointSet2& A) {
  const PrimeModulus& m = A.modulus();
  const auto& pts = A.points();
  const std::size_t n = pts.size();
  u64 count = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      Vec2 d1 = vsub(m, pts[j], pts[i]);
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        Vec2 d2 = vsub(m, pts[k], pts[j]);
        if (dot(m, d1, d2) == 0 && cross(m, d1, d2) != 0) ++count;
      }
    }
  return count;
}

CornerFastResult count_corners_fast_detailed(const PointSet2& A, int workers) {
  const PrimeModulus& m = A.modulus();
  const auto& pts = A.points();
  const std::size_t n = pts.size();
  CornerFastResult result;
  if (n < 3) {
    // still report isotropic pairs for n == 2
    if (n == 2 && m.minus_one_is_square()) {
      Vec2 d = vsub(m, pts[1], pts[0]);
      if (is_isotropic(m, d)) result.isotropic_pairs_skipped = 1;
    }
    return result;
  }
  DirectionTable dirs(m);

  auto process_range = [&](std::size_t lo, std::size_t hi, u64& corners, u64& iso_arms) {
    std::vector<u32> cnt(dirs.count(), 0);
    std::vector<u32> touched;
    touched.reserve(n);
    for (std::size_t i = lo; i < hi; ++i) {
      touched.clear();
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        u32 idx = dirs.index_of_diff(pts[j], pts[i]);
        if (cnt[idx]++ == 0) touched.push_back(idx);
      }
      for (u32 idx : touched) {
        if (dirs.isotropic(idx)) {
          iso_arms += cnt[idx];
          continue;
        }
        corners += (u64)cnt[idx] * cnt[dirs.perp(idx)];
      }
      for (u32 idx : touched) cnt[idx] = 0;
    }
  };

  const int nw = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  if (nw == 1) {
    u64 iso_arms = 0;
    process_range(0, n, result.corners, iso_arms);
    result.isotropic_pairs_skipped = iso_arms / 2;
    return result;
  }
  std::vector<u64> corners_part(nw, 0), iso_part(nw, 0);
  std::vector<std::thread> threads;
  const std::size_t chunk = (n + nw - 1) / nw;
  for (int w = 0; w < nw; ++w) {
    std::size_t lo = std::min(n, w * chunk), hi = std::min(n, lo + chunk);
    threads.emplace_back([&, lo, hi, w]() { process_range(lo, hi, corners_part[w], iso_part[w]); });
  }
  for (auto& t : threads) t.join();
  u64 iso_arms = 0;
  for (int w = 0; w < nw; ++w) {
    result.corners += corners_part[w];
    iso_arms += iso_part[w];
  }
  result.isotropic_pairs_skipped = iso_arms / 2;
  return result;
}

u64 count_corners_fast(const PointSet2& A, int workers) {
  return count_corners_fast_detailed(A, workers).corners;
}

u64 count_rectangles_oracle(const PointSet2& A) {
  const PrimeModulus& m = A.modulus();
  const auto& pts = A.points();
  const std::size_t n = pts.size();
  u64 count = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (!corner_at(m, pts[i], pts[j], pts[k])) continue;
        for (std::size_t l = 0; l < n; ++l) {
          if (l == i || l == j || l == k) continue;
          if (corner_at(m, pts[j], pts[k], pts[l]) && corner_at(m, pts[k], pts[l], pts[i]) &&
              corner_at(m, pts[l], pts[i], pts[j]))
            ++count;
        }
      }
    }
  return count;
}

u64 count_rectangles_fast(const PointSet2& A) {
  const PrimeModulus& m = A.modulus();
  const auto& pts = A.points();
  const std::size_t n = pts.size();
  u64 count = 0;
  // A valid rectangle is a parallelogram, so (r1,r2,r3) with a corner at r2
  // forces r4 = r1 + r3 - r2; membership plus the remaining corner checks
  // make this an exact restructuring of the oracle, one triple per quadruple.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (!corner_at(m, pts[i], pts[j], pts[k])) continue;
        Vec2 r4 = vsub(m, vadd(m, pts[i], pts[k]), pts[j]);
        if (r4 == pts[i] || r4 == pts[j] || r4 == pts[k]) continue;
        if (!A.contains(r4)) continue;
        if (corner_at(m, pts[j], pts[k], r4) && corner_at(m, pts[k], r4, pts[i]) &&
            corner_at(m, r4, pts[i], pts[j]))
          ++count;
      }
    }
  return count;
}

namespace {

// Ordered energy quadruples of the lifted set whose projections all lie on
// one isotropic line, beyond the trivial matches. On such a line the
// paraboloid height is affine in the line parameter, so the quadruple
// relation reduces to the one-dimensional energy of the parameters.
u64 isotropic_collinear_energy(const PointSet2& A) {
  const PrimeModulus& m = A.modulus();
  if (!m.minus_one_is_square()) return 0;
  u64 t = *m.sqrt_minus_one();
  u64 residual = 0;
  for (u64 s : {t, m.p() - t}) {
    Vec2 dir{1u, static_cast<u32>(s)};
    // group points by the line offset in direction dir; the x coordinate
    // parametrizes each line since dir.x = 1
    std::unordered_map<u32, std::vector<u32>> by_line;
    for (const Vec2& pt : A.points()) {
      AffineLine l = AffineLine::through_direction(m, pt, dir);
      by_line[l.c()].push_back(pt.x);
    }
    for (auto& [c, params] : by_line) {
      const u64 cnt = params.size();
      if (cnt < 2) continue;
      residual += additive_energy_1d(m, params) - trivial_energy(cnt);
    }
  }
  return residual;
}

}  // namespace

u64 count_rectangles_via_energy(const PointSet2& A, int workers) {
  const u64 n = A.size();
  if (n < 4) return 0;
  ParaboloidSet S = ParaboloidSet::lift(A);
  u64 lambda = additive_energy(A.modulus(), S.points(), workers);
  return lambda - trivial_energy(n) - isotropic_collinear_energy(A);
}

u64 incidences(const PointSet2& A, std::span<const AffineLine> lines) {
  const PrimeModulus& m = A.modulus();
  u64 count = 0;
  for (const AffineLine& l : lines)
    for (const Vec2& pt : A.points())
      if (l.contains(m, pt)) ++count;
  return count;
}

MultiplicityTable MultiplicityTable::build(const PointSet2& A) {
  const PrimeModulus& m = A.modulus();
  const auto& pts = A.points();
  MultiplicityTable table;
  std::unordered_map<AffineLine, u64, LineHash> pair_counts;
  pair_counts.reserve(pts.size() * pts.size() / 2 + 1);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      ++pair_counts[AffineLine::through(m, pts[i], pts[j])];
  table.counts_.reserve(pair_counts.size());
  for (const auto& [line, pairs] : pair_counts) {
    // n points on a line produce C(n,2) pairs; invert exactly
    u64 n = (1 + isqrt_u64(1 + 8 * pairs)) / 2;
    table.counts_.emplace(line, static_cast<u32>(n));
  }
  return table;
}

std::optional<u32> MultiplicityTable::lookup(const AffineLine& l) const {
  auto it = counts_.find(l);
  if (it == counts_.end()) return std::nullopt;
  return it->second;
}

u32 MultiplicityTable::count(const AffineLine& l) const {
  auto v = lookup(l);
  if (!v) throw PreconditionError("line carries fewer than two points of the set");
  return *v;
}

u64 MultiplicityTable::pair_mass() const {
  u64 acc = 0;
  for (const auto& [line, n] : counts_) acc += (u64)n * (n - 1) / 2;
  return acc;
}

std::vector<AffineLine> rich_lines(const MultiplicityTable& table, u32 k) {
  if (k < 2) throw PreconditionError("rich-line threshold must be at least 2");
  std::vector<AffineLine> out;
  for (const auto& [line, n] : table.entries())
    if (n >= k) out.push_back(line);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<AffineLine> rich_lines(const PointSet2& A, u32 k) {
  return rich_lines(MultiplicityTable::build(A), k);
}

RichLineHistogram dyadic_histogram(const MultiplicityTable& table) {
  RichLineHistogram h;
  for (const auto& [line, n] : table.entries()) {
    u32 k = 1;
    while (2 * (u64)k <= n) k *= 2;  // n in [k, 2k)
    ++h.classes[k];
    ++h.total_lines;
  }
  return h;
}

RichLineHistogram dyadic_histogram(const PointSet2& A) {
  return dyadic_histogram(MultiplicityTable::build(A));
}

std::vector<BoundReport> verify_incidence_bounds(const PointSet2& A,
                                                 std::span<const AffineLine> lines,
                                                 const ProductStructure* product) {
  const PrimeModulus& m = A.modulus();
  const double p = static_cast<double>(m.p());
  const double na = static_cast<double>(A.size());
  const double nl = static_cast<double>(lines.size());
  const double measured = static_cast<double>(incidences(A, lines));
  std::vector<BoundReport> out;

  {
    bool hyp = std::pow(na, 13.0) <= std::pow(p, 15.0) * nl * nl;
    double bound = std::pow(na, 11.0 / 15.0) * std::pow(nl, 11.0 / 15.0) + na + nl;
    out.push_back(make_bound_report("stevens_de_zeeuw", measured, bound, 0, hyp));
  }
  {
    double bound = na * nl / p + std::sqrt(na * nl * p);
    out.push_back(make_bound_report("vinh", measured, bound));
  }
  if (product) {
    const double nx = static_cast<double>(product->xs.size());
    const double ny = static_cast<double>(product->ys.size());
    if (nx * ny != na)
      throw PreconditionError("declared product structure does not match the set size");
    bool hyp = nx * nl <= p * p;
    double bound = std::pow(nx, 0.75) * std::sqrt(ny) * std::pow(nl, 0.75) + nl;
    out.push_back(make_bound_report("product", measured, bound, 0, hyp));
  }

  // rich-line counts restricted to the supplied family
  if (!lines.empty()) {
    std::vector<u32> mult(lines.size(), 0);
    for (std::size_t i = 0; i < lines.size(); ++i)
      for (const Vec2& pt : A.points())
        if (lines[i].contains(m, pt)) ++mult[i];
    for (u64 k = 2; k <= A.size(); k *= 2) {
      u64 rich = 0;
      for (u32 c : mult)
        if (c >= k) ++rich;
      double kd = static_cast<double>(k);
      double crude = std::pow(na, 2.75) * std::pow(kd, -3.75) + std::pow(na, 1.25) / kd;
      out.push_back(
          make_bound_report("rich_lines_crude", static_cast<double>(rich), crude, kd));
      double strong = std::pow(na, 2.75) * std::pow(kd, -3.75) + na / kd +
                      std::pow(na, 6.5) * std::pow(p, -7.5);
      out.push_back(
          make_bound_report("rich_lines_strong", static_cast<double>(rich), strong, kd));
    }
  }
  return out;
}

PointSet2 sumset_of_two_lines(const PrimeModulus& m, const AffineLine& line_a,
                              std::span<const Vec2> A, const AffineLine& line_b,
                              std::span<const Vec2> B) {
  if (line_a.direction(m) == line_b.direction(m))
    throw PreconditionError("the two lines must not be parallel");
  for (const Vec2& a : A)
    if (!line_a.contains(m, a)) throw PreconditionError("a summand point is off its line");
  for (const Vec2& b : B)
    if (!line_b.contains(m, b)) throw PreconditionError("a summand point is off its line");
  std::vector<Vec2> sums;
  sums.reserve(A.size() * B.size());
  for (const Vec2& a : A)
    for (const Vec2& b : B) sums.push_back(vadd(m, a, b));
  PointSet2 out(m, std::move(sums), PointSet2::OnDuplicate::Merge);
  if (out.size() != A.size() * B.size())
    throw PreconditionError("sumset collision: the summand directions were not independent");
  return out;
}

}  // namespace ffgeom
