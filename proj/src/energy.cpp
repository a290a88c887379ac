#include "ffgeom/energy.hpp"

#include <algorithm>
#include <thread>

namespace ffgeom {

namespace {

struct XClass {
  u32 x;
  u32 begin;  // index range into the sorted point array
  u32 end;
};

struct BucketedPoints {
  std::vector<Vec3> sorted;
  std::vector<XClass> classes;
  std::vector<u32> class_at;  // dense: x -> class index + 1, 0 = empty
};

BucketedPoints bucket_by_x(const PrimeModulus& m, std::span<const Vec3> pts) {
  BucketedPoints b;
  b.sorted.assign(pts.begin(), pts.end());
  std::sort(b.sorted.begin(), b.sorted.end());
  b.class_at.assign(m.p(), 0);
  for (u32 i = 0; i < b.sorted.size();) {
    u32 j = i;
    while (j < b.sorted.size() && b.sorted[j].x == b.sorted[i].x) ++j;
    b.classes.push_back({b.sorted[i].x, i, j});
    b.class_at[b.sorted[i].x] = static_cast<u32>(b.classes.size());
    i = j;
  }
  return b;
}

// Energy mass of all pair sums whose first coordinate is sx.
u64 bucket_energy(const PrimeModulus& m, const BucketedPoints& b, u64 sx,
                  std::vector<u64>& keys) {
  const u64 p = m.p();
  keys.clear();
  for (const XClass& cu : b.classes) {
    u64 vx = sx >= cu.x ? sx - cu.x : sx + p - cu.x;
    u32 ci = b.class_at[vx];
    if (ci == 0) continue;
    const XClass& cv = b.classes[ci - 1];
    for (u32 i = cu.begin; i < cu.end; ++i) {
      const u64 ay = b.sorted[i].y, az = b.sorted[i].z;
      for (u32 j = cv.begin; j < cv.end; ++j) {
        u64 sy = ay + b.sorted[j].y;
        if (sy >= p) sy -= p;
        u64 sz = az + b.sorted[j].z;
        if (sz >= p) sz -= p;
        keys.push_back(sy * p + sz);
      }
    }
  }
  std::sort(keys.begin(), keys.end());
  u64 acc = 0;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    u64 c = j - i;
    acc += c * c;
    i = j;
  }
  return acc;
}

}  // namespace

u64 additive_energy(const PrimeModulus& m, std::span<const Vec3> pts, int workers) {
  if (pts.empty()) return 0;
  BucketedPoints b = bucket_by_x(m, pts);
  const u64 p = m.p();
  if (workers <= 1) {
    u64 total = 0;
    std::vector<u64> keys;
    for (u64 sx = 0; sx < p; ++sx) total += bucket_energy(m, b, sx, keys);
    return total;
  }
  const int nw = std::min<int>(workers, static_cast<int>(p));
  std::vector<u64> partial(nw, 0);
  std::vector<std::thread> threads;
  threads.reserve(nw);
  for (int w = 0; w < nw; ++w) {
    threads.emplace_back([&, w]() {
      std::vector<u64> keys;
      u64 acc = 0;
      for (u64 sx = w; sx < p; sx += nw) acc += bucket_energy(m, b, sx, keys);
      partial[w] = acc;
    });
  }
  for (auto& t : threads) t.join();
  u64 total = 0;
  for (u64 v : partial) total += v;
  return total;
}

u64 additive_energy_oracle(const PrimeModulus& m, std::span<const Vec3> pts) {
  u64 count = 0;
  for (const Vec3& a : pts)
    for (const Vec3& b : pts) {
      Vec3 s = vadd(m, a, b);
      for (const Vec3& c : pts)
        for (const Vec3& d : pts)
          if (vadd(m, c, d) == s) ++count;
    }
  return count;
}

u64 additive_energy_1d(const PrimeModulus& m, std::span<const u32> values) {
  std::vector<u64> mult(m.p(), 0);
  for (u32 a : values)
    for (u32 b : values) ++mult[m.add(a, b)];
  u64 acc = 0;
  for (u64 c : mult) acc += c * c;
  return acc;
}

}  // namespace ffgeom
