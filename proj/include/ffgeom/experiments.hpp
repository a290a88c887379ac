#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ffgeom/decomposition.hpp"
#include "ffgeom/incidence.hpp"
#include "ffgeom/paraboloid.hpp"
#include "ffgeom/point_set.hpp"

namespace ffgeom {

/// Counter-based deterministic generator (splitmix64). Same seed, same
/// stream on every platform; all set generation routes through this.
struct SplitMix64 {
  u64 state;
  explicit SplitMix64(u64 seed) : state(seed) {}
  u64 next() {
    u64 z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  /// Uniform in [0, bound) by rejection; unbiased and deterministic.
  u64 below(u64 bound) {
    u64 limit = bound * (UINT64_MAX / bound);
    u64 v;
    do { v = next(); } while (v >= limit);
    return v % bound;
  }
};

/// Named exponents appearing in the bound formulas, stored as exact
/// rationals so reports can cite them unambiguously.
struct ExponentConstant {
  const char* name;
  int num;
  int den;
  const char* note;
};

std::span<const ExponentConstant> exponent_table();
double exponent_value(const std::string& name);
extern const char* const kConstantsVersion;

enum class GeneratorKind {
  Random,
  FullPlane,
  CartesianProduct,
  FewLines,
  GridUnion,
  ParaboloidSubset,
  IsotropicLine,
  TwoLineSumset,
  SpaceRandom,
};

/// Deterministic set recipe: same spec + seed, identical set.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Random;
  u64 p = 7;
  u64 seed = 1;
  u64 n = 0;   // primary size (points, or |X| for products, or support size)
  u64 n2 = 0;  // secondary size (|Y| for products, |B| for sumsets)
  u64 m = 0;   // number of lines / grids
  u64 k = 0;   // points per line / grid side

  std::string to_string() const;
  static GeneratorSpec parse(const std::string& text, u64 default_p, u64 default_seed);
};

/// Planar generation; throws for kinds that produce non-planar data.
PointSet2 generate_planar(const GeneratorSpec& spec);
/// The paraboloid-subset kind (and any planar kind, lifted).
ParaboloidSet generate_surface(const GeneratorSpec& spec);
/// The space-random kind: a uniform support in F_p³.
std::vector<Vec3> generate_space(const GeneratorSpec& spec);
/// Grid-union generation that also exposes the constituent grids.
std::pair<PointSet2, std::vector<Grid>> generate_grid_union(const GeneratorSpec& spec);

struct FitResult {
  /// Least-squares slope of log(count) on log(n) with the intercept pinned
  /// at zero — the exponent of a unit-constant power law.
  double exponent = 0;
  double exponent_stderr = 0;
  /// Free-intercept slope, for contrast; inflated on small families whose
  /// leading constant still drifts with n.
  double affine_exponent = 0;
  double affine_stderr = 0;
  std::size_t points_used = 0;
  std::size_t dropped_zero_counts = 0;
};

/// Fits log(count) against log(n); zero counts are dropped with a note.
/// Requires at least 3 usable points with strictly increasing sizes.
FitResult exponent_fit(std::span<const u64> sizes, std::span<const u64> counts);

enum class BoundId {
  SteinTomas,
  RichLinesCrude,
  RichLinesStrong,
  GridUnion,
  Vinh,
  StevensDeZeeuw,
};

std::string bound_id_name(BoundId id);
std::optional<BoundId> bound_id_parse(const std::string& name);

struct SweepInstance {
  u64 p = 0;
  u64 n = 0;
  double param = 0;
  double measured = 0;
  double bound = 0;
  double ratio = 0;
  std::string regime;
};

struct SweepReport {
  std::string bound;
  std::string spec;  // family description
  u64 seed = 0;
  std::string constants_version;
  std::vector<SweepInstance> instances;
  double max_ratio = 0;
  std::optional<FitResult> fit;
};

/// Runs the bound's check over every family member and collects one ratio
/// stream; instances are ordered by index, not completion time.
SweepReport bound_sweep(std::span<const GeneratorSpec> family, BoundId bound);

}  // namespace ffgeom
