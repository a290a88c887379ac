#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ffgeom/point_set.hpp"

namespace ffgeom {

/// One empirical bound check: the measured count, the bound formula's value
/// on the instance, and their ratio. Reports never pass/fail an asymptotic
/// inequality — the constants are unspecified — they just expose the ratio.
struct BoundReport {
  std::string bound_id;
  double param = 0;  // richness threshold k or j, when applicable
  double measured = 0;
  double bound_value = 0;
  double ratio = 0;
  bool hypothesis_ok = true;
  std::string note;
};

inline BoundReport make_bound_report(std::string id, double measured, double bound,
                                     double param = 0, bool hyp = true,
                                     std::string note = {}) {
  BoundReport r;
  r.bound_id = std::move(id);
  r.param = param;
  r.measured = measured;
  r.bound_value = bound;
  r.ratio = bound > 0 ? measured / bound : 0.0;
  r.hypothesis_ok = hyp;
  r.note = std::move(note);
  return r;
}

/// n(l) = |A ∩ l| for every line carrying at least two points of A.
/// 1-rich lines are never materialized.
class MultiplicityTable {
 public:
  static MultiplicityTable build(const PointSet2& A);

  std::optional<u32> lookup(const AffineLine& l) const;
  /// n(l) for a line known to carry >= 2 points; throws otherwise.
  u32 count(const AffineLine& l) const;
  std::size_t stored_lines() const { return counts_.size(); }
  const std::unordered_map<AffineLine, u32, LineHash>& entries() const { return counts_; }

  /// Σ_l C(n(l),2) — must equal C(n,2), every pair spanning one line.
  u64 pair_mass() const;

 private:
  std::unordered_map<AffineLine, u32, LineHash> counts_;
};

/// Dyadic histogram of line multiplicities: class k = 2^j holds the lines
/// with n(l) in [k, 2k), so classes partition all stored lines and each
/// class-k line satisfies n(l) ~ k.
struct RichLineHistogram {
  std::map<u32, u64> classes;  // dyadic class value -> number of lines
  u64 total_lines = 0;
};

struct CornerFastResult {
  u64 corners = 0;
  /// Unordered point pairs whose direction is isotropic; such pairs can
  /// never contribute a corner arm and are skipped, counted here rather
  /// than silently.
  u64 isotropic_pairs_skipped = 0;
};

/// Ordered triples (x0,x1,x2) of distinct points with a right angle at x1:
/// (x1-x0)·(x2-x1) = 0 and the points not collinear. Literal O(n³) loop.
u64 count_corners_oracle(const PointSet2& A);

/// Same count as the oracle in O(n²): per point, tabulate the other points
/// by canonical direction and sum cnt(d)·cnt(d_perp) over ordered pairs of
/// perpendicular non-isotropic directions.
CornerFastResult count_corners_fast_detailed(const PointSet2& A, int workers = 1);
u64 count_corners_fast(const PointSet2& A, int workers = 1);

/// Ordered quadruples (r1,r2,r3,r4) of distinct points where every cyclic
/// triple is a corner; 8 per geometric rectangle. Literal O(n⁴) loop.
u64 count_rectangles_oracle(const PointSet2& A);

/// O(n³): enumerate corners at r2 and test the forced fourth vertex
/// r4 = r1 + r3 - r2 for membership, verifying the remaining corners.
u64 count_rectangles_fast(const PointSet2& A);

/// O(n²): lift A to the paraboloid, count Λ by sum-multiplicity hashing,
/// subtract trivial quadruples and the isotropic-line collinear residue.
u64 count_rectangles_via_energy(const PointSet2& A, int workers = 1);

/// |{(a,l) : a ∈ A, l ∈ L, a ∈ l}|.
u64 incidences(const PointSet2& A, std::span<const AffineLine> lines);

/// All lines with n(l) >= k. Requires k >= 2.
std::vector<AffineLine> rich_lines(const PointSet2& A, u32 k);
std::vector<AffineLine> rich_lines(const MultiplicityTable& table, u32 k);

RichLineHistogram dyadic_histogram(const PointSet2& A);
RichLineHistogram dyadic_histogram(const MultiplicityTable& table);

/// A declared Cartesian product structure A = xs × ys, enabling the
/// product-set incidence bound.
struct ProductStructure {
  std::vector<u32> xs;
  std::vector<u32> ys;
};

/// Evaluates every applicable incidence/rich-line bound on the instance and
/// emits one report each:
///  - point-line incidence bound |A|^{11/15}|L|^{11/15} + |A| + |L|
///    (hypothesis |A|^13 <= p^15 |L|^2),
///  - Vinh bound |A||L|/p + sqrt(|A||L| p),
///  - product bound |X|^{3/4}|Y|^{1/2}|L|^{3/4} + |L| when a product
///    structure is declared (hypothesis |X||L| <= p²),
///  - threshold rich-line bounds per dyadic k: the crude form
///    n^{11/4} k^{-15/4} + n^{5/4} k^{-1} and the strong form
///    n^{11/4} k^{-15/4} + n k^{-1} + n^{13/2} p^{-15/2},
///    measured against |{l ∈ L : n(l) >= k}|.
std::vector<BoundReport> verify_incidence_bounds(const PointSet2& A,
                                                 std::span<const AffineLine> lines,
                                                 const ProductStructure* product = nullptr);

/// S = {a + b : a ∈ A, b ∈ B} for A, B on two non-parallel lines; the sums
/// are pairwise distinct, so |S| = |A||B|.
PointSet2 sumset_of_two_lines(const PrimeModulus& m, const AffineLine& line_a,
                              std::span<const Vec2> A, const AffineLine& line_b,
                              std::span<const Vec2> B);

}  // namespace ffgeom
