#pragma once

#include <span>
#include <vector>

#include "ffgeom/core.hpp"

namespace ffgeom {

/// Additive energy Λ(S) = #{(a,b,c,d) ∈ S⁴ : a+b = c+d}, computed by
/// multiplicity hashing of pairwise sums: Λ = Σ_s mult(s)².
///
/// Pairs are bucketed by the first coordinate of the sum, so the hashing
/// state per bucket stays small and cache-resident; total work is O(|S|²)
/// plus a scan of the p residue classes. Buckets may be sharded across
/// workers; the result is an exact integer independent of the partitioning.
u64 additive_energy(const PrimeModulus& m, std::span<const Vec3> pts, int workers = 1);

/// Literal quadruple-loop oracle, O(|S|⁴). Keep |S| small.
u64 additive_energy_oracle(const PrimeModulus& m, std::span<const Vec3> pts);

/// One-dimensional energy of a multiset of residues: Σ_s mult(s)² over
/// pairwise sums mod p (ordered pairs, repeats included).
u64 additive_energy_1d(const PrimeModulus& m, std::span<const u32> values);

/// Number of trivial energy quadruples of an n-point set: those with
/// (c,d) = (a,b) or (c,d) = (b,a), i.e. 2n² - n.
inline u64 trivial_energy(u64 n) { return 2 * n * n - n; }

}  // namespace ffgeom
