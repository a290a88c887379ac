#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ffgeom {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using cplx = std::complex<double>;

/// Thrown when an operation's stated preconditions are violated.
/// The CLI maps this to exit code 2.
struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

/// Arithmetic over F_p for an odd prime p.
///
/// Primality is checked at construction. p is capped below 2^31 so that
/// dot products of residues fit in 64-bit intermediates without overflow;
/// desk-scale experiments never need more.
class PrimeModulus {
 public:
  explicit PrimeModulus(u64 p);

  u64 p() const { return p_; }

  /// True iff -1 is a square mod p, equivalently p ≡ 1 (mod 4).
  /// Isotropic directions (d with d·d = 0, d ≠ 0) exist exactly in this case.
  bool minus_one_is_square() const { return minus_one_square_; }

  /// Smallest t with t² ≡ -1 (mod p), when one exists.
  std::optional<u64> sqrt_minus_one() const;

  u64 reduce(u64 v) const { return v % p_; }
  u64 reduce_signed(i64 v) const {
    i64 r = v % static_cast<i64>(p_);
    return static_cast<u64>(r < 0 ? r + static_cast<i64>(p_) : r);
  }
  u64 add(u64 a, u64 b) const { u64 s = a + b; return s >= p_ ? s - p_ : s; }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p_ - b; }
  u64 neg(u64 a) const { return a == 0 ? 0 : p_ - a; }
  u64 mul(u64 a, u64 b) const { return (a * b) % p_; }
  u64 pow(u64 base, u64 e) const;
  u64 inv(u64 a) const;

  bool operator==(const PrimeModulus& o) const { return p_ == o.p_; }

 private:
  u64 p_;
  bool minus_one_square_;
};

/// A point of F_p², coordinates stored reduced in [0, p).
struct Vec2 {
  u32 x = 0, y = 0;
  friend auto operator<=>(const Vec2&, const Vec2&) = default;
};

/// A point of F_p³.
struct Vec3 {
  u32 x = 0, y = 0, z = 0;
  friend auto operator<=>(const Vec3&, const Vec3&) = default;
};

Vec2 vadd(const PrimeModulus& m, Vec2 a, Vec2 b);
Vec2 vsub(const PrimeModulus& m, Vec2 a, Vec2 b);
Vec3 vadd(const PrimeModulus& m, Vec3 a, Vec3 b);
Vec3 vsub(const PrimeModulus& m, Vec3 a, Vec3 b);

/// a·b mod p.
u64 dot(const PrimeModulus& m, Vec2 a, Vec2 b);
u64 dot(const PrimeModulus& m, Vec3 a, Vec3 b);
/// a.x b.y - a.y b.x mod p; zero iff a, b are parallel.
u64 cross(const PrimeModulus& m, Vec2 a, Vec2 b);

/// Canonical representative of the direction class of d: the first nonzero
/// coordinate is scaled to 1, so every direction is (1,t) or (0,1).
/// Throws on the zero vector.
Vec2 canonical_direction(const PrimeModulus& m, Vec2 d);

/// True iff d·d = 0 for a nonzero direction d. Such directions exist iff
/// -1 is a square mod p.
bool is_isotropic(const PrimeModulus& m, Vec2 d);

/// An affine line {(x,y) : ax + by = c}, canonicalized so that the first
/// nonzero coefficient of (a,b) equals 1. Two equal lines therefore have
/// bit-identical representations, making lines usable as exact hash keys
/// in multiplicity tables.
class AffineLine {
 public:
  static AffineLine from_coeffs(const PrimeModulus& m, u64 a, u64 b, u64 c);
  static AffineLine through(const PrimeModulus& m, Vec2 p1, Vec2 p2);
  static AffineLine through_direction(const PrimeModulus& m, Vec2 point, Vec2 dir);

  u32 a() const { return a_; }
  u32 b() const { return b_; }
  u32 c() const { return c_; }

  bool contains(const PrimeModulus& m, Vec2 pt) const;
  /// Canonical direction (b, -a).
  Vec2 direction(const PrimeModulus& m) const;
  /// The line with the same (a,b) through a given point.
  AffineLine parallel_through(const PrimeModulus& m, Vec2 pt) const;
  /// All p points of the line.
  std::vector<Vec2> points(const PrimeModulus& m) const;

  friend auto operator<=>(const AffineLine&, const AffineLine&) = default;

 private:
  AffineLine(u32 a, u32 b, u32 c) : a_(a), b_(b), c_(c) {}
  u32 a_, b_, c_;
};

/// Spec'd operation name; alias for AffineLine::through.
AffineLine line_through(const PrimeModulus& m, Vec2 p1, Vec2 p2);

/// The unique line through x perpendicular to l (its direction d' satisfies
/// d·d' = 0). Throws for isotropic l, where the perpendicular direction
/// coincides with l's own and the construction degenerates.
AffineLine perpendicular_at(const PrimeModulus& m, const AffineLine& l, Vec2 x);

/// All p(p+1) lines of F_p².
std::vector<AffineLine> all_lines(const PrimeModulus& m);

struct LineHash {
  std::size_t operator()(const AffineLine& l) const {
    u64 h = (u64)l.a() * 0x9e3779b97f4a7c15ull;
    h ^= ((u64)l.b() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
    h *= 0xbf58476d1ce4e5b9ull;
    h ^= ((u64)l.c() + 0x94d049bb133111ebull + (h << 6) + (h >> 2));
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

/// The nontrivial additive character e(x) = exp(2·pi·i·x/p).
cplx additive_character(const PrimeModulus& m, u64 x);

/// Precomputed table of e(r) for r in [0,p); the workhorse for transforms.
class CharacterTable {
 public:
  explicit CharacterTable(const PrimeModulus& m);
  const cplx& operator()(u64 r) const { return table_[r]; }
  /// e(-r).
  const cplx& conj_at(u64 r) const { return table_[r == 0 ? 0 : p_ - r]; }

 private:
  u64 p_;
  std::vector<cplx> table_;
};

/// Indexes the p+1 canonical directions of F_p²: t in [0,p) is (1,t) and
/// index p is (0,1). Caches the perpendicular pairing and isotropy flags.
class DirectionTable {
 public:
  explicit DirectionTable(const PrimeModulus& m);

  u32 count() const { return static_cast<u32>(p_ + 1); }
  /// Index of the canonical direction of (a - b); throws if a == b.
  u32 index_of_diff(Vec2 a, Vec2 b) const;
  u32 index_of(Vec2 dir) const;
  u32 perp(u32 idx) const { return perp_[idx]; }
  bool isotropic(u32 idx) const { return isotropic_[idx]; }
  Vec2 direction(u32 idx) const;

 private:
  u64 p_;
  std::vector<u32> inv_;   // modular inverses, inv_[0] unused
  std::vector<u32> perp_;
  std::vector<bool> isotropic_;
};

}  // namespace ffgeom
