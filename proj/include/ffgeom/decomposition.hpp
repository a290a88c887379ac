#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "ffgeom/incidence.hpp"
#include "ffgeom/point_set.hpp"

namespace ffgeom {

/// The intersection pattern of parallel-line families in two perpendicular,
/// non-isotropic directions: rows are lines with normal `row_normal` and
/// offsets `row_cs`, columns likewise. The point set is all pairwise
/// intersections, |rows|·|cols| distinct points.
struct Grid {
  Vec2 dir;   // canonical row direction
  Vec2 perp;  // canonical column direction, dir·perp = 0
  Vec2 row_normal;
  std::vector<u32> row_cs;  // sorted offsets
  Vec2 col_normal;
  std::vector<u32> col_cs;

  std::size_t rows() const { return row_cs.size(); }
  std::size_t cols() const { return col_cs.size(); }
  std::size_t cell_count() const { return row_cs.size() * col_cs.size(); }

  bool contains(const PrimeModulus& m, Vec2 pt) const;
  std::vector<Vec2> points(const PrimeModulus& m) const;
  u64 intersection_count(const PointSet2& A) const;

  /// Grid spanned by k_rows lines through `point` in direction `dir` shifted
  /// to the given row offsets; convenience for tests and generators.
  static Grid from_offsets(const PrimeModulus& m, Vec2 dir, std::vector<u32> row_cs,
                           std::vector<u32> col_cs);
};

/// Δ(x,l): the number of rectangles with vertex x whose sides adjacent to x
/// lie on l and on the perpendicular of l at x. Counted by the pair loop
/// over (y,z) with fourth vertex y+z-x tested for membership.
u64 delta_grid_count(const PointSet2& A, Vec2 x, const AffineLine& l);

/// The same quantity via the fourth-vertex identity: Δ(x,l) = |A ∩ G(x,l)|
/// where G(x,l) = {y+z-x} is a grid. Independent code path for the identity
/// check.
u64 delta_via_grid(const PointSet2& A, Vec2 x, const AffineLine& l);
std::optional<Grid> fourth_vertex_grid(const PointSet2& A, Vec2 x, const AffineLine& l);

struct DecompositionParams {
  u32 k = 2;
  u32 levels = 1;
  double density_floor = 1.0;
};

/// k = ceil(n^{17/41}), levels = ceil(log2(n)/41), floor = n^{-1/41}.
DecompositionParams default_decomposition_params(std::size_t n);

struct SelectedGrid {
  Grid grid;
  u64 selected_count = 0;  // |A_remaining ∩ G| at selection time
};

struct LevelPart {
  u32 level = 0;
  std::vector<SelectedGrid> grids;
  std::vector<Vec2> points;  // the points moved into A_i, sorted
};

/// The partition A = A' ∪ ⋃ A_i produced by greedy grid selection, with the
/// per-grid certificates recorded at selection time.
struct GreedyDecomposition {
  DecompositionParams params;
  std::vector<LevelPart> parts;
  std::vector<Vec2> a_prime;

  std::size_t covered_points() const;
};

/// Greedy selection: at level i, repeatedly pick the candidate grid with the
/// largest remaining intersection while that count is at least 2^{-i} k²,
/// and move those points into A_i. Candidates: for each non-isotropic
/// perpendicular direction pair realized by the remaining points (at least
/// one point pair along each direction), the k richest lines per direction,
/// ties broken by canonical line order.
GreedyDecomposition greedy_grid_decomposition(
    const PointSet2& A, std::optional<DecompositionParams> params = std::nullopt);

struct DensityReport {
  u32 side = 0;
  double density_floor = 0;
  double max_density = 0;  // max over candidate grids of |A∩G| / side²
  u64 max_count = 0;
  bool exceeds_floor = false;
};

/// Scans the candidate j-by-j grid family and reports the worst density
/// against the floor; the pigeonhole extension of the A' floor to j >= k.
DensityReport grid_density_check(const PointSet2& A, u32 j, double density_floor);

/// Checks the decomposition's structural invariants against the source set:
/// exact partition, grid membership of each part, selection windows
/// [2^{-i-1}k², 2^{-i+1}k²], and the A' density floor. Returns a diagnostic
/// string, empty when everything holds.
std::string check_decomposition_invariants(const PointSet2& A, const GreedyDecomposition& d);

/// Rectangle counts classified by the dyadic size of the richest edge line.
struct DyadicRectangleProfile {
  std::map<u32, u64> classes;  // dyadic class of n(l_R) -> ordered rectangles
  double threshold_low = 0;    // n^{17/41}
  double threshold_high = 0;   // n^{6/11}
  u64 low = 0;                 // n(l_R) <= threshold_low
  u64 mid = 0;                 // threshold_low < n(l_R) <= threshold_high
  u64 high = 0;                // n(l_R) > threshold_high
  u64 total = 0;
};

/// Classifies every ordered rectangle by its richest edge line l_R (ties by
/// canonical line order). O(n³) enumeration; throws above the budget.
DyadicRectangleProfile dyadic_rectangle_profile(const PointSet2& A, std::size_t budget = 64);

struct SubadditivityReport {
  // fourth roots of the lifted-set additive energies: the L⁴ quantity for
  // which the fourth-root triangle inequality is exact
  double lhs_energy_root = 0;
  double rhs_energy_root = 0;
  bool energy_holds = false;
  // bare ordered rectangle counts, reported for contrast; the inequality
  // can fail for these when a rectangle straddles parts
  double lhs_rectangle_root = 0;
  double rhs_rectangle_root = 0;
  bool rectangle_holds = false;
  std::vector<u64> part_energies;
};

/// Verifies Λ(lift A)^{1/4} <= Σ_k Λ(lift A_k)^{1/4} on exact integer
/// counts. Throws if the parts do not partition A.
SubadditivityReport fourth_root_subadditivity_check(const PointSet2& A,
                                                    std::span<const std::vector<Vec2>> parts);

/// For B contained in the union of m k-by-k grids: measures the number of
/// j-rich lines of B against k⁵ (j⁻⁴ m⁴ + 1).
BoundReport grid_union_rich_line_check(const PointSet2& B, std::span<const Grid> grids, u32 j);

}  // namespace ffgeom
