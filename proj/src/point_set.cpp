#include "ffgeom/point_set.hpp"

#include <algorithm>

namespace ffgeom {

PointSet2::PointSet2(PrimeModulus mod, std::vector<Vec2> points, OnDuplicate policy)
    : mod_(mod), pts_(std::move(points)) {
  for (const Vec2& pt : pts_)
    if (pt.x >= mod_.p() || pt.y >= mod_.p())
      throw PreconditionError("point coordinate out of range [0,p)");
  std::sort(pts_.begin(), pts_.end());
  auto dup = std::adjacent_find(pts_.begin(), pts_.end());
  if (dup != pts_.end()) {
    if (policy == OnDuplicate::Reject)
      throw PreconditionError("duplicate point (" + std::to_string(dup->x) + "," +
                              std::to_string(dup->y) + ")");
    pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
  }
  keys_.reserve(pts_.size());
  for (const Vec2& pt : pts_) keys_.push_back(key(pt));
}

bool PointSet2::contains(Vec2 pt) const {
  return std::binary_search(keys_.begin(), keys_.end(), key(pt));
}

PointSet2 PointSet2::full_plane(PrimeModulus mod) {
  std::vector<Vec2> pts;
  pts.reserve(mod.p() * mod.p());
  for (u64 x = 0; x < mod.p(); ++x)
    for (u64 y = 0; y < mod.p(); ++y)
      pts.push_back({static_cast<u32>(x), static_cast<u32>(y)});
  return PointSet2(mod, std::move(pts));
}

u64 paraboloid_height(const PrimeModulus& m, Vec2 pt) { return dot(m, pt, pt); }

ParaboloidSet ParaboloidSet::lift(const PointSet2& base) {
  const PrimeModulus& m = base.modulus();
  std::vector<Vec3> lifted;
  lifted.reserve(base.size());
  for (const Vec2& pt : base.points())
    lifted.push_back({pt.x, pt.y, static_cast<u32>(paraboloid_height(m, pt))});
  return ParaboloidSet(m, base.points(), std::move(lifted));
}

ParaboloidSet ParaboloidSet::full(PrimeModulus mod) {
  return lift(PointSet2::full_plane(mod));
}

PointSet2 ParaboloidSet::project() const { return PointSet2(mod_, base_); }

}  // namespace ffgeom
