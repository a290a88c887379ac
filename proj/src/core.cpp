#include "ffgeom/core.hpp"

#include <cmath>
#include <numbers>

namespace ffgeom {

namespace {

// Deterministic Miller-Rabin; sufficient bases for any 64-bit input,
// though the constructor caps p below 2^31 anyway.
bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) { d >>= 1; ++r; }
  auto mulmod = [n](u64 a, u64 b) -> u64 {
    return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % n);
  };
  auto powmod = [&](u64 a, u64 e) -> u64 {
    u64 acc = 1;
    a %= n;
    while (e) {
      if (e & 1) acc = mulmod(acc, a);
      a = mulmod(a, a);
      e >>= 1;
    }
    return acc;
  };
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod(a, d);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 0; i + 1 < r; ++i) {
      x = mulmod(x, x);
      if (x == n - 1) { composite = false; break; }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace

PrimeModulus::PrimeModulus(u64 p) : p_(p) {
  if (p < 3) throw PreconditionError("modulus must be an odd prime >= 3");
  if (p >= (1ull << 31)) throw PreconditionError("modulus must fit below 2^31");
  if (!is_prime_u64(p)) throw PreconditionError("modulus " + std::to_string(p) + " is not prime");
  minus_one_square_ = (p % 4 == 1);
}

u64 PrimeModulus::pow(u64 base, u64 e) const {
  u64 acc = 1;
  base %= p_;
  while (e) {
    if (e & 1) acc = mul(acc, base);
    base = mul(base, base);
    e >>= 1;
  }
  return acc;
}

u64 PrimeModulus::inv(u64 a) const {
  a %= p_;
  if (a == 0) throw PreconditionError("division by zero mod " + std::to_string(p_));
  return pow(a, p_ - 2);
}

std::optional<u64> PrimeModulus::sqrt_minus_one() const {
  if (!minus_one_square_) return std::nullopt;
  // Euler: for any non-residue g, g^((p-1)/4) is a square root of -1.
  // Scanning small candidates keeps this deterministic.
  for (u64 g = 2; g < p_; ++g) {
    u64 t = pow(g, (p_ - 1) / 4);
    if (mul(t, t) == p_ - 1) return std::min(t, p_ - t);
  }
  return std::nullopt;  // unreachable for valid p
}

Vec2 vadd(const PrimeModulus& m, Vec2 a, Vec2 b) {
  return {static_cast<u32>(m.add(a.x, b.x)), static_cast<u32>(m.add(a.y, b.y))};
}

Vec2 vsub(const PrimeModulus& m, Vec2 a, Vec2 b) {
  return {static_cast<u32>(m.sub(a.x, b.x)), static_cast<u32>(m.sub(a.y, b.y))};
}

Vec3 vadd(const PrimeModulus& m, Vec3 a, Vec3 b) {
  return {static_cast<u32>(m.add(a.x, b.x)), static_cast<u32>(m.add(a.y, b.y)),
          static_cast<u32>(m.add(a.z, b.z))};
}

Vec3 vsub(const PrimeModulus& m, Vec3 a, Vec3 b) {
  return {static_cast<u32>(m.sub(a.x, b.x)), static_cast<u32>(m.sub(a.y, b.y)),
          static_cast<u32>(m.sub(a.z, b.z))};
}

u64 dot(const PrimeModulus& m, Vec2 a, Vec2 b) {
  return ((u64)a.x * b.x + (u64)a.y * b.y) % m.p();
}

u64 dot(const PrimeModulus& m, Vec3 a, Vec3 b) {
  return (((u64)a.x * b.x) % m.p() + ((u64)a.y * b.y) % m.p() + ((u64)a.z * b.z) % m.p()) % m.p();
}

u64 cross(const PrimeModulus& m, Vec2 a, Vec2 b) {
  u64 lhs = ((u64)a.x * b.y) % m.p();
  u64 rhs = ((u64)a.y * b.x) % m.p();
  return m.sub(lhs, rhs);
}

Vec2 canonical_direction(const PrimeModulus& m, Vec2 d) {
  u64 dx = m.reduce(d.x), dy = m.reduce(d.y);
  if (dx != 0) {
    u64 s = m.inv(dx);
    return {1u, static_cast<u32>(m.mul(dy, s))};
  }
  if (dy != 0) return {0u, 1u};
  throw PreconditionError("zero vector has no direction");
}

bool is_isotropic(const PrimeModulus& m, Vec2 d) {
  if (m.reduce(d.x) == 0 && m.reduce(d.y) == 0)
    throw PreconditionError("zero vector has no isotropy class");
  return dot(m, d, d) == 0;
}

AffineLine AffineLine::from_coeffs(const PrimeModulus& m, u64 a, u64 b, u64 c) {
  a = m.reduce(a);
  b = m.reduce(b);
  c = m.reduce(c);
  if (a == 0 && b == 0) throw PreconditionError("line coefficients (a,b) must not both vanish");
  if (a != 0) {
    u64 s = m.inv(a);
    return AffineLine(1u, static_cast<u32>(m.mul(b, s)), static_cast<u32>(m.mul(c, s)));
  }
  u64 s = m.inv(b);
  return AffineLine(0u, 1u, static_cast<u32>(m.mul(c, s)));
}

AffineLine AffineLine::through(const PrimeModulus& m, Vec2 p1, Vec2 p2) {
  if (p1 == p2) throw PreconditionError("two distinct points are required to span a line");
  Vec2 d = vsub(m, p2, p1);
  // normal (d.y, -d.x) is perpendicular to the direction d
  u64 a = d.y, b = m.neg(d.x);
  u64 c = (a * p1.x + b * p1.y) % m.p();
  return from_coeffs(m, a, b, c);
}

AffineLine AffineLine::through_direction(const PrimeModulus& m, Vec2 point, Vec2 dir) {
  Vec2 d = canonical_direction(m, dir);
  u64 a = d.y, b = m.neg(d.x);
  u64 c = (a * point.x + b * point.y) % m.p();
  return from_coeffs(m, a, b, c);
}

bool AffineLine::contains(const PrimeModulus& m, Vec2 pt) const {
  return ((u64)a_ * pt.x + (u64)b_ * pt.y) % m.p() == c_;
}

Vec2 AffineLine::direction(const PrimeModulus& m) const {
  return canonical_direction(m, {b_, static_cast<u32>(m.neg(a_))});
}

AffineLine AffineLine::parallel_through(const PrimeModulus& m, Vec2 pt) const {
  u64 c = ((u64)a_ * pt.x + (u64)b_ * pt.y) % m.p();
  return AffineLine(a_, b_, static_cast<u32>(c));
}

std::vector<Vec2> AffineLine::points(const PrimeModulus& m) const {
  std::vector<Vec2> out;
  out.reserve(m.p());
  if (a_ == 1) {
    // x = c - b·y
    for (u64 y = 0; y < m.p(); ++y)
      out.push_back({static_cast<u32>(m.sub(c_, m.mul(b_, y))), static_cast<u32>(y)});
  } else {
    // a = 0, b = 1: y = c
    for (u64 x = 0; x < m.p(); ++x) out.push_back({static_cast<u32>(x), c_});
  }
  return out;
}

AffineLine line_through(const PrimeModulus& m, Vec2 p1, Vec2 p2) {
  return AffineLine::through(m, p1, p2);
}

AffineLine perpendicular_at(const PrimeModulus& m, const AffineLine& l, Vec2 x) {
  Vec2 d = l.direction(m);
  if (is_isotropic(m, d))
    throw PreconditionError("perpendicular is undefined for an isotropic line (d.d = 0)");
  // The perpendicular line's direction d' satisfies d·d' = 0, so its normal
  // is parallel to d itself: {y : d·y = d·x}.
  return AffineLine::from_coeffs(m, d.x, d.y, dot(m, d, x));
}

std::vector<AffineLine> all_lines(const PrimeModulus& m) {
  std::vector<AffineLine> out;
  out.reserve(m.p() * (m.p() + 1));
  for (u64 t = 0; t <= m.p(); ++t) {
    Vec2 dir = t < m.p() ? Vec2{1u, static_cast<u32>(t)} : Vec2{0u, 1u};
    u64 a = dir.y, b = m.neg(dir.x);
    for (u64 c = 0; c < m.p(); ++c) out.push_back(AffineLine::from_coeffs(m, a, b, c));
  }
  return out;
}

cplx additive_character(const PrimeModulus& m, u64 x) {
  double angle = 2.0 * std::numbers::pi * static_cast<double>(m.reduce(x)) /
                 static_cast<double>(m.p());
  return std::polar(1.0, angle);
}

CharacterTable::CharacterTable(const PrimeModulus& m) : p_(m.p()), table_(m.p()) {
  for (u64 r = 0; r < p_; ++r) table_[r] = additive_character(m, r);
}

DirectionTable::DirectionTable(const PrimeModulus& m) : p_(m.p()) {
  inv_.assign(p_, 0);
  if (p_ > 1) inv_[1] = 1;
  for (u64 i = 2; i < p_; ++i)
    inv_[i] = static_cast<u32>(m.p() - m.mul(m.p() / i, inv_[m.p() % i]));
  perp_.assign(p_ + 1, 0);
  isotropic_.assign(p_ + 1, false);
  // perp of (1,t) is (-t,1) ~ (1,-1/t) for t != 0; perp of (1,0) is (0,1).
  perp_[0] = static_cast<u32>(p_);
  perp_[p_] = 0;
  for (u64 t = 1; t < p_; ++t) perp_[t] = static_cast<u32>(m.neg(inv_[t]));
  for (u64 t = 0; t < p_; ++t)
    if (m.add(1, m.mul(t, t)) == 0) isotropic_[t] = true;
}

u32 DirectionTable::index_of_diff(Vec2 a, Vec2 b) const {
  u64 dx = a.x >= b.x ? a.x - b.x : a.x + p_ - b.x;
  u64 dy = a.y >= b.y ? a.y - b.y : a.y + p_ - b.y;
  if (dx == 0) {
    if (dy == 0) throw PreconditionError("equal points have no direction");
    return static_cast<u32>(p_);
  }
  return static_cast<u32>((dy * inv_[dx]) % p_);
}

u32 DirectionTable::index_of(Vec2 dir) const {
  u64 dx = dir.x % p_, dy = dir.y % p_;
  if (dx == 0) {
    if (dy == 0) throw PreconditionError("zero vector has no direction");
    return static_cast<u32>(p_);
  }
  return static_cast<u32>((dy * inv_[dx]) % p_);
}

Vec2 DirectionTable::direction(u32 idx) const {
  if (idx == p_) return {0u, 1u};
  return {1u, idx};
}

}  // namespace ffgeom
