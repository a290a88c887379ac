#pragma once

#include <span>
#include <vector>

#include "ffgeom/core.hpp"

namespace ffgeom {

/// A deduplicated, sorted set of points in F_p² — the universal input A.
class PointSet2 {
 public:
  enum class OnDuplicate { Reject, Merge };

  PointSet2(PrimeModulus mod, std::vector<Vec2> points,
            OnDuplicate policy = OnDuplicate::Reject);

  const PrimeModulus& modulus() const { return mod_; }
  std::size_t size() const { return pts_.size(); }
  const std::vector<Vec2>& points() const { return pts_; }

  /// x·p + y; total order on F_p² used for the membership index.
  u64 key(Vec2 pt) const { return (u64)pt.x * mod_.p() + pt.y; }
  bool contains(Vec2 pt) const;

  static PointSet2 full_plane(PrimeModulus mod);

  bool operator==(const PointSet2& o) const { return mod_ == o.mod_ && pts_ == o.pts_; }

 private:
  PrimeModulus mod_;
  std::vector<Vec2> pts_;
  std::vector<u64> keys_;
};

/// A planar set lifted to the paraboloid {(x, y, x²+y²)} in F_p³.
class ParaboloidSet {
 public:
  static ParaboloidSet lift(const PointSet2& base);
  /// All p² points of the paraboloid.
  static ParaboloidSet full(PrimeModulus mod);

  PointSet2 project() const;
  const PrimeModulus& modulus() const { return mod_; }
  std::size_t size() const { return lifted_.size(); }
  const std::vector<Vec3>& points() const { return lifted_; }
  const std::vector<Vec2>& base() const { return base_; }

 private:
  ParaboloidSet(PrimeModulus mod, std::vector<Vec2> base, std::vector<Vec3> lifted)
      : mod_(mod), base_(std::move(base)), lifted_(std::move(lifted)) {}
  PrimeModulus mod_;
  std::vector<Vec2> base_;
  std::vector<Vec3> lifted_;
};

/// The paraboloid height of a planar point: x·x.
u64 paraboloid_height(const PrimeModulus& m, Vec2 pt);

}  // namespace ffgeom
