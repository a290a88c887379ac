#include "ffgeom/paraboloid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "ffgeom/energy.hpp"
#include "ffgeom/incidence.hpp"

namespace ffgeom {

SurfaceFunction::SurfaceFunction(PrimeModulus mod, std::vector<std::pair<Vec2, cplx>> values)
    : mod_(mod), vals_(std::move(values)) {
  for (auto& [pt, v] : vals_)
    if (pt.x >= mod_.p() || pt.y >= mod_.p())
      throw PreconditionError("surface point out of range [0,p)");
  std::erase_if(vals_, [](const auto& e) { return e.second == cplx{0.0, 0.0}; });
  std::sort(vals_.begin(), vals_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < vals_.size(); ++i)
    if (vals_[i].first == vals_[i - 1].first)
      throw PreconditionError("duplicate surface point");
}

SurfaceFunction SurfaceFunction::indicator(const ParaboloidSet& S) {
  std::vector<std::pair<Vec2, cplx>> vals;
  vals.reserve(S.size());
  for (const Vec2& pt : S.base()) vals.emplace_back(pt, cplx{1.0, 0.0});
  return SurfaceFunction(S.modulus(), std::move(vals));
}

SpaceFunction SpaceFunction::sparse(PrimeModulus mod, std::vector<std::pair<Vec3, cplx>> values) {
  SpaceFunction g(mod);
  g.sparse_ = std::move(values);
  for (auto& [pt, v] : g.sparse_)
    if (pt.x >= mod.p() || pt.y >= mod.p() || pt.z >= mod.p())
      throw PreconditionError("space point out of range [0,p)");
  std::erase_if(g.sparse_, [](const auto& e) { return e.second == cplx{0.0, 0.0}; });
  std::sort(g.sparse_.begin(), g.sparse_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < g.sparse_.size(); ++i)
    if (g.sparse_[i].first == g.sparse_[i - 1].first)
      throw PreconditionError("duplicate space point");
  return g;
}

SpaceFunction SpaceFunction::dense(PrimeModulus mod, std::vector<cplx> values) {
  SpaceFunction g(mod);
  u64 p = mod.p();
  if (values.size() != p * p * p)
    throw PreconditionError("dense space function must have p^3 entries");
  g.dense_form_ = true;
  g.dense_ = std::move(values);
  return g;
}

SpaceFunction SpaceFunction::indicator(PrimeModulus mod, std::span<const Vec3> support) {
  std::vector<std::pair<Vec3, cplx>> vals;
  vals.reserve(support.size());
  for (const Vec3& pt : support) vals.emplace_back(pt, cplx{1.0, 0.0});
  return sparse(mod, std::move(vals));
}

cplx SpaceFunction::at(Vec3 pt) const {
  if (dense_form_) return dense_[index(pt)];
  auto it = std::lower_bound(sparse_.begin(), sparse_.end(), pt,
                             [](const auto& e, const Vec3& q) { return e.first < q; });
  if (it != sparse_.end() && it->first == pt) return it->second;
  return {0.0, 0.0};
}

std::size_t SpaceFunction::support_size() const {
  if (!dense_form_) return sparse_.size();
  std::size_t n = 0;
  for (const cplx& v : dense_)
    if (v != cplx{0.0, 0.0}) ++n;
  return n;
}

std::vector<std::pair<Vec3, cplx>> SpaceFunction::support_entries() const {
  if (!dense_form_) return sparse_;
  std::vector<std::pair<Vec3, cplx>> out;
  const u64 p = mod_.p();
  for (u64 x = 0; x < p; ++x)
    for (u64 y = 0; y < p; ++y)
      for (u64 z = 0; z < p; ++z) {
        const cplx& v = dense_[(x * p + y) * p + z];
        if (v != cplx{0.0, 0.0})
          out.emplace_back(Vec3{static_cast<u32>(x), static_cast<u32>(y), static_cast<u32>(z)},
                           v);
      }
  return out;
}

const std::vector<cplx>& SpaceFunction::dense_values() const {
  if (!dense_form_) throw PreconditionError("space function is stored sparsely");
  return dense_;
}

SpaceFunction SpaceFunction::to_dense() const {
  if (dense_form_) return *this;
  const u64 p = mod_.p();
  std::vector<cplx> vals(p * p * p, cplx{0.0, 0.0});
  for (const auto& [pt, v] : sparse_) vals[index(pt)] = v;
  return dense(mod_, std::move(vals));
}

SpaceFunction SpaceFunction::to_sparse() const {
  if (!dense_form_) return *this;
  return sparse(mod_, support_entries());
}

double lr_norm(const SpaceFunction& u, double r) {
  if (r < 1.0) throw PreconditionError("L^r norms require r >= 1");
  double acc = 0;
  if (u.is_dense()) {
    for (const cplx& v : u.dense_values()) {
      double a = std::abs(v);
      if (a > 0) acc += std::pow(a, r);
    }
  } else {
    for (const auto& [pt, v] : u.support_entries()) acc += std::pow(std::abs(v), r);
  }
  return std::pow(acc, 1.0 / r);
}

NormReport lr_norm_report(const SpaceFunction& u, double r) {
  return {r, lr_norm(u, r), "counting"};
}

double l2_sigma_norm(const SurfaceFunction& f) {
  const double psize = static_cast<double>(f.modulus().p()) * f.modulus().p();
  double acc = 0;
  for (const auto& [pt, v] : f.entries()) acc += std::norm(v);
  return std::sqrt(acc / psize);
}

NormReport l2_sigma_norm_report(const SurfaceFunction& f) {
  return {2.0, l2_sigma_norm(f), "normalized-surface"};
}

cplx inner_space(const SpaceFunction& u, const SpaceFunction& v) {
  cplx acc{0.0, 0.0};
  if (u.support_size() <= v.support_size() && !u.is_dense()) {
    for (const auto& [pt, val] : u.support_entries()) acc += val * std::conj(v.at(pt));
    return acc;
  }
  for (const auto& [pt, val] : v.support_entries()) acc += u.at(pt) * std::conj(val);
  return acc;
}

cplx inner_surface_sigma(const SurfaceFunction& f, const SurfaceFunction& h) {
  const PrimeModulus& m = f.modulus();
  std::unordered_map<u64, cplx> hv;
  hv.reserve(h.entries().size());
  for (const auto& [pt, v] : h.entries()) hv.emplace((u64)pt.x * m.p() + pt.y, v);
  cplx acc{0.0, 0.0};
  for (const auto& [pt, v] : f.entries()) {
    auto it = hv.find((u64)pt.x * m.p() + pt.y);
    if (it != hv.end()) acc += v * std::conj(it->second);
  }
  return acc / (static_cast<double>(m.p()) * m.p());
}

SpaceFunction extension(const SurfaceFunction& f, u64 dense_cap) {
  const PrimeModulus& m = f.modulus();
  const u64 p = m.p();
  if (p > dense_cap)
    throw PreconditionError("dense extension capped at p <= " + std::to_string(dense_cap));
  CharacterTable e(m);
  const double inv_psize = 1.0 / (static_cast<double>(p) * p);
  // lift the support once: xi = (u, v, u²+v²)
  std::vector<std::pair<Vec3, cplx>> lifted;
  lifted.reserve(f.support_size());
  for (const auto& [pt, v] : f.entries())
    lifted.emplace_back(Vec3{pt.x, pt.y, static_cast<u32>(paraboloid_height(m, pt))}, v);
  std::vector<cplx> out(p * p * p);
  for (u64 x = 0; x < p; ++x)
    for (u64 y = 0; y < p; ++y)
      for (u64 z = 0; z < p; ++z) {
        cplx acc{0.0, 0.0};
        for (const auto& [xi, v] : lifted) {
          u64 phase = (x * xi.x + y * xi.y + z * xi.z) % p;
          acc += v * e(phase);
        }
        out[(x * p + y) * p + z] = acc * inv_psize;
      }
  return SpaceFunction::dense(m, std::move(out));
}

SpaceFunction extension_via_axis_transform(const SurfaceFunction& f, u64 dense_cap) {
  const PrimeModulus& m = f.modulus();
  const u64 p = m.p();
  if (p > dense_cap)
    throw PreconditionError("dense extension capped at p <= " + std::to_string(dense_cap));
  CharacterTable e(m);
  const double inv_psize = 1.0 / (static_cast<double>(p) * p);
  // place f dσ on F³ and apply the character transform one axis at a time
  std::vector<cplx> buf(p * p * p, cplx{0.0, 0.0});
  for (const auto& [pt, v] : f.entries()) {
    u64 h = paraboloid_height(m, pt);
    buf[((u64)pt.x * p + pt.y) * p + h] = v * inv_psize;
  }
  std::vector<cplx> line(p), next(p * p * p);
  // axis strides for (x p + y) p + z indexing
  const u64 strides[3] = {p * p, p, 1};
  for (int axis = 0; axis < 3; ++axis) {
    const u64 stride = strides[axis];
    for (u64 block = 0; block < p * p; ++block) {
      u64 base;
      if (axis == 0) base = block;                                // line over x at (y,z)
      else if (axis == 1) base = (block / p) * p * p + block % p; // over y at (x,z)
      else base = block * p;                                      // over z at (x,y)
      for (u64 t = 0; t < p; ++t) line[t] = buf[base + t * stride];
      for (u64 out_i = 0; out_i < p; ++out_i) {
        cplx acc{0.0, 0.0};
        for (u64 t = 0; t < p; ++t) acc += line[t] * e((out_i * t) % p);
        next[base + out_i * stride] = acc;
      }
    }
    buf.swap(next);
  }
  return SpaceFunction::dense(m, std::move(buf));
}

SurfaceFunction restriction(const SpaceFunction& g) {
  const PrimeModulus& m = g.modulus();
  const u64 p = m.p();
  CharacterTable e(m);
  auto support = g.support_entries();
  std::vector<std::pair<Vec2, cplx>> vals;
  vals.reserve(p * p);
  for (u64 u = 0; u < p; ++u)
    for (u64 v = 0; v < p; ++v) {
      Vec2 base{static_cast<u32>(u), static_cast<u32>(v)};
      u64 h = paraboloid_height(m, base);
      cplx acc{0.0, 0.0};
      for (const auto& [x, val] : support) {
        u64 phase = (u * x.x + v * x.y + h * x.z) % p;
        acc += val * e.conj_at(phase);
      }
      if (acc != cplx{0.0, 0.0}) vals.emplace_back(base, acc);
    }
  return SurfaceFunction(m, std::move(vals));
}

EnergyReport energy_rectangle_identity_check(const ParaboloidSet& S) {
  const PrimeModulus& m = S.modulus();
  EnergyReport rep;
  rep.lambda = additive_energy(m, S.points());
  rep.trivial = trivial_energy(S.size());
  PointSet2 base = S.project();
  // collinear residue: isotropic lines only (see count_rectangles_via_energy)
  u64 rect = count_rectangles_via_energy(base);
  rep.rectangle_part = rect;
  rep.collinear_part = rep.lambda - rep.trivial - rect;
  rep.rectangle_independent = count_rectangles_fast(base);
  rep.identity_ok = rep.lambda == rep.trivial + rep.rectangle_part + rep.collinear_part &&
                    rep.rectangle_part == rep.rectangle_independent;
  return rep;
}

L4EnergyReport l4_energy_identity_check(const ParaboloidSet& G, u64 dense_cap) {
  const PrimeModulus& m = G.modulus();
  L4EnergyReport rep;
  SpaceFunction ext = extension(SurfaceFunction::indicator(G), dense_cap);
  double l4 = lr_norm(ext, 4.0);
  rep.l4_fourth = l4 * l4 * l4 * l4;
  rep.c_p = std::pow(static_cast<double>(m.p()), -5.0);
  rep.lambda = additive_energy(m, G.points());
  double expected = rep.c_p * static_cast<double>(rep.lambda);
  rep.relative_error =
      expected == 0 ? rep.l4_fourth : std::abs(rep.l4_fourth - expected) / expected;
  return rep;
}

bool is_level_set(const SpaceFunction& g) {
  for (const auto& [pt, v] : g.support_entries())
    if (std::abs(std::abs(v) - 1.0) > 1e-9) return false;
  return true;
}

namespace {

// Height-z slices of the support, lifted onto the paraboloid.
std::map<u32, std::vector<Vec2>> support_slices(const SpaceFunction& g) {
  std::map<u32, std::vector<Vec2>> slices;
  for (const auto& [pt, v] : g.support_entries()) slices[pt.z].push_back({pt.x, pt.y});
  return slices;
}

// ‖(G_z dσ)^∨‖₄ via the exact L⁴–energy identity; avoids a dense transform
// per slice.
double slice_l4_norm(const PrimeModulus& m, const std::vector<Vec2>& slice) {
  PointSet2 base(m, slice);
  ParaboloidSet lifted = ParaboloidSet::lift(base);
  u64 lambda = additive_energy(m, lifted.points());
  return std::pow(std::pow(static_cast<double>(m.p()), -5.0) * static_cast<double>(lambda),
                  0.25);
}

}  // namespace

MtMachineReport mt_machine_check(const SpaceFunction& g) {
  if (!is_level_set(g))
    throw PreconditionError("the machine applies to level-set functions (|g| = 1 on support)");
  const PrimeModulus& m = g.modulus();
  MtMachineReport rep;
  rep.support = g.support_size();
  rep.lhs = l2_sigma_norm(restriction(g));
  auto slices = support_slices(g);
  rep.nonempty_slices = slices.size();
  double slice_sum = 0;
  for (const auto& [z, pts] : slices) slice_sum += slice_l4_norm(m, pts);
  double gsz = static_cast<double>(rep.support);
  rep.rhs = std::sqrt(gsz) +
            std::pow(gsz, 0.375) * std::sqrt(static_cast<double>(m.p())) * std::sqrt(slice_sum);
  rep.ratio = rep.rhs > 0 ? rep.lhs / rep.rhs : 0;
  return rep;
}

CertifyReport certify_level_set(const SpaceFunction& g) {
  if (!is_level_set(g))
    throw PreconditionError("certification applies to level-set functions (|g| = 1 on support)");
  const PrimeModulus& m = g.modulus();
  const double p = static_cast<double>(m.p());
  CertifyReport rep;
  rep.support = g.support_size();
  rep.measured = l2_sigma_norm(restriction(g));
  const double gsz = static_cast<double>(rep.support);
  rep.target = std::pow(gsz, 135.0 / 188.0);

  auto slices = support_slices(g);
  rep.nonempty_slices = slices.size();
  for (const auto& [z, pts] : slices) rep.max_slice = std::max<u64>(rep.max_slice, pts.size());

  const double t_st = std::pow(p, 94.0 / 53.0);
  const double t_slice = std::pow(p, 26.0 / 21.0);
  const double t_high = std::pow(p, 47.0 / 21.0);

  auto bound_small_slices = [&](double sz) {
    return std::sqrt(sz) + std::pow(p, 3.0 / 41.0) * std::pow(sz, 111.0 / 164.0);
  };
  auto bound_thick_slices = [&](double sz) {
    return std::sqrt(sz) + std::pow(sz, 7.0 / 8.0) * std::pow(p, -5.0 / 14.0);
  };

  if (gsz <= t_st) {
    rep.regime = "stein-tomas";
    rep.bound_value = std::sqrt(gsz) + gsz / std::sqrt(p);
  } else if (static_cast<double>(rep.max_slice) <= t_slice) {
    rep.regime = "small-slices";
    rep.bound_value = bound_small_slices(gsz);
  } else if (gsz >= t_high) {
    rep.regime = "cauchy-schwarz-holder";
    rep.bound_value = std::sqrt(gsz) + std::pow(gsz, 11.0 / 16.0) * std::pow(p, 1.0 / 16.0);
  } else {
    bool all_thick = true;
    u64 small_mass = 0, thick_mass = 0;
    for (const auto& [z, pts] : slices) {
      if (static_cast<double>(pts.size()) < t_slice) {
        all_thick = false;
        small_mass += pts.size();
      } else {
        thick_mass += pts.size();
      }
    }
    if (all_thick) {
      rep.regime = "thick-slices";
      rep.bound_value = bound_thick_slices(gsz);
    } else {
      // split by slice size and add the two governing bounds; valid since
      // the L² norm of ĝ is subadditive across the split of g
      rep.regime = "mixed-split";
      rep.bound_value = bound_small_slices(static_cast<double>(small_mass)) +
                        bound_thick_slices(static_cast<double>(thick_mass));
    }
  }
  rep.ratio_target = rep.target > 0 ? rep.measured / rep.target : 0;
  rep.ratio_bound = rep.bound_value > 0 ? rep.measured / rep.bound_value : 0;
  return rep;
}

double restriction_ratio(const SurfaceFunction& f, double r, u64 dense_cap) {
  if (f.support_size() == 0) throw PreconditionError("restriction ratio of the zero function");
  if (r < 1.0) throw PreconditionError("L^r norms require r >= 1");
  double denom = l2_sigma_norm(f);
  double numer = lr_norm(extension(f, dense_cap), r);
  return numer / denom;
}

}  // namespace ffgeom
