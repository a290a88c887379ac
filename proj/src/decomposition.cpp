#include "ffgeom/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "ffgeom/energy.hpp"

namespace ffgeom {

namespace {

inline bool corner_at(const PrimeModulus& m, Vec2 x0, Vec2 x1, Vec2 x2) {
  Vec2 d1 = vsub(m, x1, x0);
  Vec2 d2 = vsub(m, x2, x1);
  return dot(m, d1, d2) == 0 && cross(m, d1, d2) != 0;
}

u64 offset_of(const PrimeModulus& m, Vec2 normal, Vec2 pt) {
  return ((u64)normal.x * pt.x + (u64)normal.y * pt.y) % m.p();
}

// Canonical normal shared by all lines in direction d.
Vec2 normal_of_direction(const PrimeModulus& m, Vec2 d) {
  return canonical_direction(m, {d.y, static_cast<u32>(m.neg(d.x))});
}

}  // namespace

bool Grid::contains(const PrimeModulus& m, Vec2 pt) const {
  u32 cr = static_cast<u32>(offset_of(m, row_normal, pt));
  if (!std::binary_search(row_cs.begin(), row_cs.end(), cr)) return false;
  u32 cc = static_cast<u32>(offset_of(m, col_normal, pt));
  return std::binary_search(col_cs.begin(), col_cs.end(), cc);
}

std::vector<Vec2> Grid::points(const PrimeModulus& m) const {
  std::vector<Vec2> out;
  out.reserve(cell_count());
  u64 det = m.sub(m.mul(row_normal.x, col_normal.y), m.mul(row_normal.y, col_normal.x));
  u64 det_inv = m.inv(det);  // nonzero: the normals are non-parallel
  for (u32 cr : row_cs)
    for (u32 cc : col_cs) {
      u64 x = m.mul(m.sub(m.mul(cr, col_normal.y), m.mul(cc, row_normal.y)), det_inv);
      u64 y = m.mul(m.sub(m.mul(cc, row_normal.x), m.mul(cr, col_normal.x)), det_inv);
      out.push_back({static_cast<u32>(x), static_cast<u32>(y)});
    }
  return out;
}

u64 Grid::intersection_count(const PointSet2& A) const {
  const PrimeModulus& m = A.modulus();
  u64 count = 0;
  for (const Vec2& pt : A.points())
    if (contains(m, pt)) ++count;
  return count;
}

Grid Grid::from_offsets(const PrimeModulus& m, Vec2 dir, std::vector<u32> row_cs,
                        std::vector<u32> col_cs) {
  Vec2 d = canonical_direction(m, dir);
  if (is_isotropic(m, d)) throw PreconditionError("grid directions must be non-isotropic");
  Grid g;
  g.dir = d;
  g.perp = canonical_direction(m, {static_cast<u32>(m.neg(d.y)), d.x});
  g.row_normal = normal_of_direction(m, d);
  g.col_normal = normal_of_direction(m, g.perp);
  g.row_cs = std::move(row_cs);
  g.col_cs = std::move(col_cs);
  std::sort(g.row_cs.begin(), g.row_cs.end());
  std::sort(g.col_cs.begin(), g.col_cs.end());
  return g;
}

u64 delta_grid_count(const PointSet2& A, Vec2 x, const AffineLine& l) {
  const PrimeModulus& m = A.modulus();
  if (!A.contains(x)) throw PreconditionError("delta vertex must belong to the set");
  if (!l.contains(m, x)) throw PreconditionError("delta line must pass through the vertex");
  AffineLine perp = perpendicular_at(m, l, x);  // throws for isotropic l
  std::vector<Vec2> ys, zs;
  for (const Vec2& pt : A.points()) {
    if (pt == x) continue;
    if (l.contains(m, pt)) ys.push_back(pt);
    if (perp.contains(m, pt)) zs.push_back(pt);
  }
  u64 count = 0;
  for (const Vec2& y : ys)
    for (const Vec2& z : zs)
      if (A.contains(vsub(m, vadd(m, y, z), x))) ++count;
  return count;
}

std::optional<Grid> fourth_vertex_grid(const PointSet2& A, Vec2 x, const AffineLine& l) {
  const PrimeModulus& m = A.modulus();
  if (!A.contains(x)) throw PreconditionError("delta vertex must belong to the set");
  if (!l.contains(m, x)) throw PreconditionError("delta line must pass through the vertex");
  AffineLine perp = perpendicular_at(m, l, x);
  Vec2 d = l.direction(m);
  Vec2 dperp = perp.direction(m);
  // Rows pass through the perpendicular's points in direction d, columns
  // through the line's points in direction d_perp; their intersections are
  // exactly {y + z - x}.
  std::set<u32> row_cs, col_cs;
  Vec2 row_normal = normal_of_direction(m, d);
  Vec2 col_normal = normal_of_direction(m, dperp);
  for (const Vec2& pt : A.points()) {
    if (pt == x) continue;
    if (l.contains(m, pt)) col_cs.insert(static_cast<u32>(offset_of(m, col_normal, pt)));
    if (perp.contains(m, pt)) row_cs.insert(static_cast<u32>(offset_of(m, row_normal, pt)));
  }
  if (row_cs.empty() || col_cs.empty()) return std::nullopt;
  Grid g;
  g.dir = d;
  g.perp = dperp;
  g.row_normal = row_normal;
  g.col_normal = col_normal;
  g.row_cs.assign(row_cs.begin(), row_cs.end());
  g.col_cs.assign(col_cs.begin(), col_cs.end());
  return g;
}

u64 delta_via_grid(const PointSet2& A, Vec2 x, const AffineLine& l) {
  auto g = fourth_vertex_grid(A, x, l);
  if (!g) return 0;
  return g->intersection_count(A);
}

DecompositionParams default_decomposition_params(std::size_t n) {
  DecompositionParams p;
  if (n < 2) return p;
  double nd = static_cast<double>(n);
  p.k = std::max<u32>(2, static_cast<u32>(std::ceil(std::pow(nd, 17.0 / 41.0) - 1e-9)));
  p.levels = std::max<u32>(1, static_cast<u32>(std::ceil(std::log2(nd) / 41.0 - 1e-9)));
  p.density_floor = std::pow(nd, -1.0 / 41.0);
  return p;
}

std::size_t GreedyDecomposition::covered_points() const {
  std::size_t total = a_prime.size();
  for (const LevelPart& part : parts) total += part.points.size();
  return total;
}

namespace {

struct OffsetCount {
  u32 offset;
  u32 count;
};

// The k richest offsets (count desc, offset asc), padded with unused
// offsets up to `side` so the grid is honestly side-by-side.
std::vector<u32> top_offsets(const PrimeModulus& m,
                             const std::unordered_map<u32, u32>& counts, u32 side) {
  std::vector<OffsetCount> all;
  all.reserve(counts.size());
  for (auto [off, cnt] : counts) all.push_back({off, cnt});
  std::sort(all.begin(), all.end(), [](const OffsetCount& a, const OffsetCount& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.offset < b.offset;
  });
  std::vector<u32> chosen;
  chosen.reserve(side);
  for (const auto& oc : all) {
    if (chosen.size() == side) break;
    chosen.push_back(oc.offset);
  }
  if (chosen.size() < side) {
    std::unordered_set<u32> used(chosen.begin(), chosen.end());
    for (u32 c = 0; c < m.p() && chosen.size() < side; ++c)
      if (!used.count(c)) chosen.push_back(c);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

Grid candidate_grid(const PrimeModulus& m, const DirectionTable& dirs, u32 dir_idx,
                    std::span<const Vec2> pts, u32 side) {
  Vec2 d = dirs.direction(dir_idx);
  Vec2 dp = dirs.direction(dirs.perp(dir_idx));
  Vec2 row_normal = normal_of_direction(m, d);
  Vec2 col_normal = normal_of_direction(m, dp);
  std::unordered_map<u32, u32> row_counts, col_counts;
  for (const Vec2& pt : pts) {
    ++row_counts[static_cast<u32>(offset_of(m, row_normal, pt))];
    ++col_counts[static_cast<u32>(offset_of(m, col_normal, pt))];
  }
  Grid g;
  g.dir = d;
  g.perp = dp;
  g.row_normal = row_normal;
  g.col_normal = col_normal;
  g.row_cs = top_offsets(m, row_counts, side);
  g.col_cs = top_offsets(m, col_counts, side);
  return g;
}

// Direction-pair representatives (the smaller index of {d, perp d}) that are
// non-isotropic and realized by at least one point pair in each direction.
std::vector<u32> realized_direction_pairs(const DirectionTable& dirs,
                                          std::span<const Vec2> pts) {
  std::vector<bool> realized(dirs.count(), false);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      realized[dirs.index_of_diff(pts[i], pts[j])] = true;
  std::vector<u32> out;
  for (u32 idx = 0; idx < dirs.count(); ++idx) {
    if (dirs.isotropic(idx)) continue;
    u32 q = dirs.perp(idx);
    if (idx > q) continue;  // one representative per pair
    if (realized[idx] && realized[q]) out.push_back(idx);
  }
  return out;
}

}  // namespace

GreedyDecomposition greedy_grid_decomposition(const PointSet2& A,
                                              std::optional<DecompositionParams> params) {
  const PrimeModulus& m = A.modulus();
  DecompositionParams par = params.value_or(default_decomposition_params(A.size()));
  if (par.k < 2) throw PreconditionError("grid side must be at least 2");
  const u32 side = static_cast<u32>(std::min<u64>(par.k, m.p()));

  GreedyDecomposition out;
  out.params = par;
  DirectionTable dirs(m);

  std::vector<Vec2> remaining = A.points();
  std::vector<LevelPart> parts(par.levels + 1);
  for (u32 i = 1; i <= par.levels; ++i) parts[i].level = i;
  const double k2 = static_cast<double>(par.k) * par.k;

  for (u32 level = 1; level <= par.levels; ++level) {
    const double tau = std::ldexp(k2, -static_cast<int>(level));  // 2^{-level} k²
    while (remaining.size() >= 2) {
      std::vector<u32> pairs = realized_direction_pairs(dirs, remaining);
      if (pairs.empty()) break;
      PointSet2 rem_set(m, remaining);
      u64 best_count = 0;
      u32 best_pair = 0;
      std::optional<Grid> best;
      for (u32 idx : pairs) {
        Grid g = candidate_grid(m, dirs, idx, remaining, side);
        u64 c = g.intersection_count(rem_set);
        if (c > best_count || (c == best_count && best && idx < best_pair)) {
          best_count = c;
          best_pair = idx;
          best = std::move(g);
        }
      }
      if (!best || static_cast<double>(best_count) < tau) break;
      // Assign to the first level whose selection threshold the count meets;
      // boundary counts land on the smaller level, keeping every recorded
      // count inside its level's dyadic window.
      u32 assigned = 1;
      while (assigned < level &&
             static_cast<double>(best_count) < std::ldexp(k2, -static_cast<int>(assigned)))
        ++assigned;
      SelectedGrid sel{*best, best_count};
      std::vector<Vec2> kept;
      kept.reserve(remaining.size());
      for (const Vec2& pt : remaining) {
        if (best->contains(m, pt))
          parts[assigned].points.push_back(pt);
        else
          kept.push_back(pt);
      }
      parts[assigned].grids.push_back(std::move(sel));
      remaining = std::move(kept);
    }
  }

  for (u32 i = 1; i <= par.levels; ++i) {
    if (parts[i].grids.empty()) continue;
    std::sort(parts[i].points.begin(), parts[i].points.end());
    out.parts.push_back(std::move(parts[i]));
  }
  std::sort(remaining.begin(), remaining.end());
  out.a_prime = std::move(remaining);
  return out;
}

DensityReport grid_density_check(const PointSet2& A, u32 j, double density_floor) {
  const PrimeModulus& m = A.modulus();
  DensityReport rep;
  rep.side = j;
  rep.density_floor = density_floor;
  if (A.size() == 0 || j < 2) return rep;
  const u32 side = static_cast<u32>(std::min<u64>(j, m.p()));
  DirectionTable dirs(m);
  for (u32 idx = 0; idx < dirs.count(); ++idx) {
    if (dirs.isotropic(idx)) continue;
    u32 q = dirs.perp(idx);
    if (idx > q) continue;
    Grid g = candidate_grid(m, dirs, idx, A.points(), side);
    u64 c = g.intersection_count(A);
    if (c > rep.max_count) rep.max_count = c;
  }
  rep.max_density = static_cast<double>(rep.max_count) / (static_cast<double>(j) * j);
  rep.exceeds_floor = rep.max_density > density_floor;
  return rep;
}

std::string check_decomposition_invariants(const PointSet2& A, const GreedyDecomposition& d) {
  const PrimeModulus& m = A.modulus();
  // exact partition
  std::vector<Vec2> all = d.a_prime;
  for (const LevelPart& part : d.parts)
    all.insert(all.end(), part.points.begin(), part.points.end());
  std::sort(all.begin(), all.end());
  if (all != A.points()) return "parts and A' do not partition A";
  // part membership and selection windows
  const double k2 = static_cast<double>(d.params.k) * d.params.k;
  for (const LevelPart& part : d.parts) {
    for (const Vec2& pt : part.points) {
      bool inside = false;
      for (const SelectedGrid& sg : part.grids)
        if (sg.grid.contains(m, pt)) { inside = true; break; }
      if (!inside) return "a part point lies outside its recorded grids";
    }
    const double tau = std::ldexp(k2, -static_cast<int>(part.level));
    for (const SelectedGrid& sg : part.grids) {
      double c = static_cast<double>(sg.selected_count);
      if (c < tau / 2 || c > 2 * tau) return "a selected grid count is outside its dyadic window";
    }
  }
  // density floor on A'
  if (!d.a_prime.empty()) {
    PointSet2 aprime(m, d.a_prime);
    DensityReport rep = grid_density_check(aprime, d.params.k, d.params.density_floor);
    if (rep.exceeds_floor) return "A' violates the grid density floor";
  }
  return {};
}

DyadicRectangleProfile dyadic_rectangle_profile(const PointSet2& A, std::size_t budget) {
  const PrimeModulus& m = A.modulus();
  const auto& pts = A.points();
  const std::size_t n = pts.size();
  if (n > budget)
    throw PreconditionError("rectangle profile budget exceeded: n = " + std::to_string(n) +
                            " > " + std::to_string(budget));
  DyadicRectangleProfile prof;
  double nd = static_cast<double>(n);
  prof.threshold_low = std::pow(nd, 17.0 / 41.0);
  prof.threshold_high = std::pow(nd, 6.0 / 11.0);
  if (n < 4) return prof;
  MultiplicityTable table = MultiplicityTable::build(A);

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (!corner_at(m, pts[i], pts[j], pts[k])) continue;
        Vec2 r4 = vsub(m, vadd(m, pts[i], pts[k]), pts[j]);
        if (r4 == pts[i] || r4 == pts[j] || r4 == pts[k]) continue;
        if (!A.contains(r4)) continue;
        if (!corner_at(m, pts[j], pts[k], r4) || !corner_at(m, pts[k], r4, pts[i]) ||
            !corner_at(m, r4, pts[i], pts[j]))
          continue;
        // richest edge line, ties by canonical order
        AffineLine edges[4] = {
            AffineLine::through(m, pts[i], pts[j]), AffineLine::through(m, pts[j], pts[k]),
            AffineLine::through(m, pts[k], r4), AffineLine::through(m, r4, pts[i])};
        u32 best_mult = 0;
        const AffineLine* best = nullptr;
        for (const AffineLine& e : edges) {
          u32 c = table.count(e);
          if (c > best_mult || (c == best_mult && best && e < *best)) {
            best_mult = c;
            best = &e;
          }
        }
        u32 cls = 1;
        while (2 * (u64)cls <= best_mult) cls *= 2;
        ++prof.classes[cls];
        ++prof.total;
        if (static_cast<double>(best_mult) <= prof.threshold_low)
          ++prof.low;
        else if (static_cast<double>(best_mult) <= prof.threshold_high)
          ++prof.mid;
        else
          ++prof.high;
      }
    }
  return prof;
}

SubadditivityReport fourth_root_subadditivity_check(const PointSet2& A,
                                                    std::span<const std::vector<Vec2>> parts) {
  const PrimeModulus& m = A.modulus();
  std::vector<Vec2> merged;
  for (const auto& part : parts) merged.insert(merged.end(), part.begin(), part.end());
  std::sort(merged.begin(), merged.end());
  if (merged != A.points()) throw PreconditionError("the given parts do not partition the set");

  SubadditivityReport rep;
  u64 whole_energy = additive_energy(m, ParaboloidSet::lift(A).points());
  u64 whole_rect = count_rectangles_via_energy(A);
  rep.lhs_energy_root = std::pow(static_cast<double>(whole_energy), 0.25);
  rep.lhs_rectangle_root = std::pow(static_cast<double>(whole_rect), 0.25);
  for (const auto& part : parts) {
    if (part.empty()) {
      rep.part_energies.push_back(0);
      continue;
    }
    PointSet2 ps(m, part);
    u64 e = additive_energy(m, ParaboloidSet::lift(ps).points());
    rep.part_energies.push_back(e);
    rep.rhs_energy_root += std::pow(static_cast<double>(e), 0.25);
    rep.rhs_rectangle_root +=
        std::pow(static_cast<double>(count_rectangles_via_energy(ps)), 0.25);
  }
  const double tol = 1e-9;
  rep.energy_holds = rep.lhs_energy_root <= rep.rhs_energy_root + tol * (1 + rep.rhs_energy_root);
  rep.rectangle_holds =
      rep.lhs_rectangle_root <= rep.rhs_rectangle_root + tol * (1 + rep.rhs_rectangle_root);
  return rep;
}

BoundReport grid_union_rich_line_check(const PointSet2& B, std::span<const Grid> grids, u32 j) {
  if (j < 2) throw PreconditionError("rich-line threshold must be at least 2");
  u64 measured = rich_lines(B, j).size();
  u64 k = 0;
  for (const Grid& g : grids) k = std::max<u64>(k, std::max(g.rows(), g.cols()));
  double kd = static_cast<double>(k);
  double md = static_cast<double>(grids.size());
  double jd = static_cast<double>(j);
  double bound = std::pow(kd, 5.0) * (std::pow(md, 4.0) / std::pow(jd, 4.0) + 1.0);
  return make_bound_report("grid_union_rich_lines", static_cast<double>(measured), bound, jd);
}

}  // namespace ffgeom
