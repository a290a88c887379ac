#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ffgeom/decomposition.hpp"
#include "ffgeom/paraboloid.hpp"
#include "ffgeom/point_set.hpp"

namespace ffgeom {

// Point-set files: a header line "p <prime> dim <2|3>", then one point per
// line as whitespace-separated coordinates. Function files append a complex
// value column (two floats). Blank lines and lines starting with '#' are
// ignored. Duplicate points and out-of-range coordinates are rejected with
// a diagnostic naming the offending line.

PointSet2 load_point_set(std::istream& in);
PointSet2 load_point_set_file(const std::string& path);
void save_point_set(std::ostream& out, const PointSet2& A);
void save_point_set_file(const std::string& path, const PointSet2& A);

std::pair<PrimeModulus, std::vector<Vec3>> load_space_points(std::istream& in);
std::pair<PrimeModulus, std::vector<Vec3>> load_space_points_file(const std::string& path);
void save_space_points(std::ostream& out, const PrimeModulus& m, std::span<const Vec3> pts);

SurfaceFunction load_surface_function(std::istream& in);
SurfaceFunction load_surface_function_file(const std::string& path);
void save_surface_function(std::ostream& out, const SurfaceFunction& f);

SpaceFunction load_space_function(std::istream& in);
SpaceFunction load_space_function_file(const std::string& path);
void save_space_function(std::ostream& out, const SpaceFunction& g);
void save_space_function_file(const std::string& path, const SpaceFunction& g);

// Decomposition dumps: a structured text listing of the parameters, the
// per-level grids (direction pair plus line offsets) with their member
// points, and the residual set; re-loadable for independent verification.

void save_decomposition(std::ostream& out, const PrimeModulus& m, const GreedyDecomposition& d);
void save_decomposition_file(const std::string& path, const PrimeModulus& m,
                             const GreedyDecomposition& d);
std::pair<PrimeModulus, GreedyDecomposition> load_decomposition(std::istream& in);
std::pair<PrimeModulus, GreedyDecomposition> load_decomposition_file(const std::string& path);

}  // namespace ffgeom
