#include "ffgeom/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_set>

namespace ffgeom {

const char* const kConstantsVersion = "1";

namespace {

const ExponentConstant kConstants[] = {
    {"rectangle_count", 99, 41, "rectangle-count exponent for small sets"},
    {"corner_count", 17, 7, "corner-count exponent for small sets"},
    {"unrestricted_count", 5, 2, "corner/rectangle exponent without size restriction"},
    {"grid_side", 17, 41, "decomposition grid side exponent"},
    {"grid_budget", 7, 41, "per-level grid count exponent"},
    {"grid_mass", 34, 41, "target grid intersection exponent"},
    {"density_floor", -1, 41, "residual-set grid density exponent"},
    {"profile_split", 6, 11, "upper dyadic threshold for the edge-line profile"},
    {"incidence_sym", 11, 15, "symmetric exponent in the point-line incidence bound"},
    {"rich_main", 11, 4, "rich-line bound, main-term numerator exponent"},
    {"rich_main_k", -15, 4, "rich-line bound, main-term threshold exponent"},
    {"rich_tail", 5, 4, "rich-line crude bound, tail-term exponent"},
    {"rich_strong_n", 13, 2, "rich-line strong bound, third-term set exponent"},
    {"rich_strong_p", -15, 2, "rich-line strong bound, third-term modulus exponent"},
    {"product_a", 3, 4, "product incidence bound, first-factor exponent"},
    {"product_b", 1, 2, "product incidence bound, second-factor exponent"},
    {"set_cap", 26, 21, "small-set hypothesis exponent"},
    {"st_crossover", 94, 53, "support size where the L² pieces balance"},
    {"thick_cap", 47, 21, "upper support cap in the thick-slice regime"},
    {"certify_target", 135, 188, "level-set certification target exponent"},
    {"restriction_range", 188, 53, "restriction estimate range endpoint"},
    {"prior_range", 32, 9, "previous restriction range endpoint"},
    {"conjectured_range", 10, 3, "range implied by a quadratic rectangle count"},
    {"slice_holder", 5, 8, "per-slice exponent in the energy slice bound"},
    {"holder_out", 11, 16, "support exponent after the slice sum"},
    {"holder_field", 1, 16, "field exponent after the slice sum"},
    {"thick_out", 269, 376, "support exponent in the thick-slice regime"},
    {"small_slice_field", 3, 41, "field exponent in the small-slice bound"},
    {"small_slice_out", 111, 164, "support exponent in the small-slice bound"},
    {"energy_quarter", 99, 164, "quarter of the rectangle-count exponent"},
    {"machine_weight", 3, 8, "support weight in the slice machine"},
    {"extractor_gate", 37, 16, "rectangle exponent needed to beat the 4/9 rate"},
    {"extractor_best", 4, 9, "best provable extractor min-entropy rate"},
    {"extractor_rate", 123, 260, "min-entropy rate from the rectangle count"},
};

u64 require_field(const GeneratorSpec& s, u64 v, const char* what) {
  if (v == 0) throw PreconditionError(std::string("generator needs ") + what + ": " + s.to_string());
  return v;
}

std::vector<u32> sample_distinct_residues(SplitMix64& rng, u64 p, u64 n) {
  if (n > p) throw PreconditionError("cannot sample more residues than p");
  std::unordered_set<u32> used;
  std::vector<u32> out;
  out.reserve(n);
  while (out.size() < n) {
    u32 v = static_cast<u32>(rng.below(p));
    if (used.insert(v).second) out.push_back(v);
  }
  return out;
}

std::vector<Vec2> sample_distinct_points(SplitMix64& rng, u64 p, u64 n) {
  if (n > p * p) throw PreconditionError("cannot sample more points than p^2");
  std::unordered_set<u64> used;
  std::vector<Vec2> out;
  out.reserve(n);
  while (out.size() < n) {
    u64 cell = rng.below(p * p);
    if (used.insert(cell).second)
      out.push_back({static_cast<u32>(cell / p), static_cast<u32>(cell % p)});
  }
  return out;
}

AffineLine random_line(SplitMix64& rng, const PrimeModulus& m) {
  u64 t = rng.below(m.p() + 1);
  Vec2 dir = t < m.p() ? Vec2{1u, static_cast<u32>(t)} : Vec2{0u, 1u};
  Vec2 through{static_cast<u32>(rng.below(m.p())), static_cast<u32>(rng.below(m.p()))};
  return AffineLine::through_direction(m, through, dir);
}

std::vector<Vec2> take_points_on_line(SplitMix64& rng, const PrimeModulus& m,
                                      const AffineLine& l, u64 count) {
  auto pts = l.points(m);
  if (count > pts.size()) throw PreconditionError("line holds only p points");
  // deterministic partial Fisher-Yates
  for (u64 i = 0; i < count; ++i) {
    u64 j = i + rng.below(pts.size() - i);
    std::swap(pts[i], pts[j]);
  }
  pts.resize(count);
  return pts;
}

}  // namespace

std::span<const ExponentConstant> exponent_table() { return kConstants; }

double exponent_value(const std::string& name) {
  for (const auto& c : kConstants)
    if (name == c.name) return static_cast<double>(c.num) / c.den;
  throw PreconditionError("unknown exponent constant: " + name);
}

std::string GeneratorSpec::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case GeneratorKind::Random: os << "random"; break;
    case GeneratorKind::FullPlane: os << "full-plane"; break;
    case GeneratorKind::CartesianProduct: os << "product"; break;
    case GeneratorKind::FewLines: os << "few-lines"; break;
    case GeneratorKind::GridUnion: os << "grid-union"; break;
    case GeneratorKind::ParaboloidSubset: os << "paraboloid-subset"; break;
    case GeneratorKind::IsotropicLine: os << "isotropic-line"; break;
    case GeneratorKind::TwoLineSumset: os << "two-line-sumset"; break;
    case GeneratorKind::SpaceRandom: os << "space-random"; break;
  }
  os << ":p=" << p;
  if (n) os << ",n=" << n;
  if (n2) os << ",n2=" << n2;
  if (m) os << ",m=" << m;
  if (k) os << ",k=" << k;
  os << ",seed=" << seed;
  return os.str();
}

GeneratorSpec GeneratorSpec::parse(const std::string& text, u64 default_p, u64 default_seed) {
  GeneratorSpec spec;
  spec.p = default_p;
  spec.seed = default_seed;
  std::string kind = text;
  std::string args;
  if (auto pos = text.find(':'); pos != std::string::npos) {
    kind = text.substr(0, pos);
    args = text.substr(pos + 1);
  }
  if (kind == "random") spec.kind = GeneratorKind::Random;
  else if (kind == "full-plane") spec.kind = GeneratorKind::FullPlane;
  else if (kind == "product") spec.kind = GeneratorKind::CartesianProduct;
  else if (kind == "few-lines") spec.kind = GeneratorKind::FewLines;
  else if (kind == "grid-union") spec.kind = GeneratorKind::GridUnion;
  else if (kind == "paraboloid-subset") spec.kind = GeneratorKind::ParaboloidSubset;
  else if (kind == "isotropic-line") spec.kind = GeneratorKind::IsotropicLine;
  else if (kind == "two-line-sumset") spec.kind = GeneratorKind::TwoLineSumset;
  else if (kind == "space-random") spec.kind = GeneratorKind::SpaceRandom;
  else throw PreconditionError("unknown generator kind: " + kind);

  std::istringstream is(args);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw PreconditionError("bad generator argument: " + item);
    std::string key = item.substr(0, eq);
    u64 value = std::stoull(item.substr(eq + 1));
    if (key == "p") spec.p = value;
    else if (key == "n") spec.n = value;
    else if (key == "n2") spec.n2 = value;
    else if (key == "m") spec.m = value;
    else if (key == "k") spec.k = value;
    else if (key == "seed") spec.seed = value;
    else throw PreconditionError("unknown generator argument: " + key);
  }
  return spec;
}

PointSet2 generate_planar(const GeneratorSpec& spec) {
  PrimeModulus mod(spec.p);
  SplitMix64 rng(spec.seed);
  switch (spec.kind) {
    case GeneratorKind::Random: {
      u64 n = require_field(spec, spec.n, "n");
      return PointSet2(mod, sample_distinct_points(rng, mod.p(), n));
    }
    case GeneratorKind::FullPlane:
      return PointSet2::full_plane(mod);
    case GeneratorKind::CartesianProduct: {
      u64 nx = require_field(spec, spec.n, "n");
      u64 ny = require_field(spec, spec.n2 ? spec.n2 : spec.n, "n2");
      auto xs = sample_distinct_residues(rng, mod.p(), nx);
      auto ys = sample_distinct_residues(rng, mod.p(), ny);
      std::vector<Vec2> pts;
      pts.reserve(nx * ny);
      for (u32 x : xs)
        for (u32 y : ys) pts.push_back({x, y});
      return PointSet2(mod, std::move(pts));
    }
    case GeneratorKind::FewLines: {
      u64 lines = require_field(spec, spec.m, "m");
      u64 per = require_field(spec, spec.k, "k");
      std::vector<Vec2> pts;
      for (u64 i = 0; i < lines; ++i) {
        auto on = take_points_on_line(rng, mod, random_line(rng, mod), per);
        pts.insert(pts.end(), on.begin(), on.end());
      }
      return PointSet2(mod, std::move(pts), PointSet2::OnDuplicate::Merge);
    }
    case GeneratorKind::GridUnion:
      return generate_grid_union(spec).first;
    case GeneratorKind::IsotropicLine: {
      if (!mod.minus_one_is_square())
        throw PreconditionError("isotropic lines require p = 1 (mod 4)");
      u64 t = *mod.sqrt_minus_one();
      Vec2 through{static_cast<u32>(rng.below(mod.p())), static_cast<u32>(rng.below(mod.p()))};
      AffineLine l = AffineLine::through_direction(mod, through, {1u, static_cast<u32>(t)});
      u64 n = spec.n ? spec.n : mod.p();
      return PointSet2(mod, take_points_on_line(rng, mod, l, n));
    }
    case GeneratorKind::TwoLineSumset: {
      u64 na = require_field(spec, spec.n, "n");
      u64 nb = spec.n2 ? spec.n2 : na;
      AffineLine la = random_line(rng, mod);
      AffineLine lb = random_line(rng, mod);
      while (lb.direction(mod) == la.direction(mod)) lb = random_line(rng, mod);
      auto A = take_points_on_line(rng, mod, la, na);
      auto B = take_points_on_line(rng, mod, lb, nb);
      return sumset_of_two_lines(mod, la, A, lb, B);
    }
    case GeneratorKind::ParaboloidSubset:
    case GeneratorKind::SpaceRandom:
      throw PreconditionError("generator kind does not produce a planar set: " + spec.to_string());
  }
  throw PreconditionError("unreachable generator kind");
}

ParaboloidSet generate_surface(const GeneratorSpec& spec) {
  if (spec.kind == GeneratorKind::ParaboloidSubset) {
    GeneratorSpec planar = spec;
    planar.kind = GeneratorKind::Random;
    return ParaboloidSet::lift(generate_planar(planar));
  }
  return ParaboloidSet::lift(generate_planar(spec));
}

std::vector<Vec3> generate_space(const GeneratorSpec& spec) {
  if (spec.kind != GeneratorKind::SpaceRandom)
    throw PreconditionError("space supports come from the space-random kind");
  PrimeModulus mod(spec.p);
  SplitMix64 rng(spec.seed);
  u64 n = require_field(spec, spec.n, "n");
  u64 cells = mod.p() * mod.p() * mod.p();
  if (n > cells) throw PreconditionError("cannot sample more points than p^3");
  std::unordered_set<u64> used;
  std::vector<Vec3> out;
  out.reserve(n);
  while (out.size() < n) {
    u64 cell = rng.below(cells);
    if (used.insert(cell).second)
      out.push_back({static_cast<u32>(cell / (mod.p() * mod.p())),
                     static_cast<u32>((cell / mod.p()) % mod.p()),
                     static_cast<u32>(cell % mod.p())});
  }
  return out;
}

std::pair<PointSet2, std::vector<Grid>> generate_grid_union(const GeneratorSpec& spec) {
  if (spec.kind != GeneratorKind::GridUnion)
    throw PreconditionError("grid unions come from the grid-union kind");
  PrimeModulus mod(spec.p);
  SplitMix64 rng(spec.seed);
  u64 grids = require_field(spec, spec.m, "m");
  u64 side = require_field(spec, spec.k, "k");
  if (side > mod.p()) throw PreconditionError("grid side larger than p");
  std::vector<Grid> out_grids;
  std::vector<Vec2> pts;
  for (u64 i = 0; i < grids; ++i) {
    Vec2 dir;
    do {
      u64 t = rng.below(mod.p() + 1);
      dir = t < mod.p() ? Vec2{1u, static_cast<u32>(t)} : Vec2{0u, 1u};
    } while (is_isotropic(mod, dir));
    auto rows = sample_distinct_residues(rng, mod.p(), side);
    auto cols = sample_distinct_residues(rng, mod.p(), side);
    Grid g = Grid::from_offsets(mod, dir, std::vector<u32>(rows.begin(), rows.end()),
                                std::vector<u32>(cols.begin(), cols.end()));
    auto cells = g.points(mod);
    pts.insert(pts.end(), cells.begin(), cells.end());
    out_grids.push_back(std::move(g));
  }
  return {PointSet2(mod, std::move(pts), PointSet2::OnDuplicate::Merge), std::move(out_grids)};
}

FitResult exponent_fit(std::span<const u64> sizes, std::span<const u64> counts) {
  if (sizes.size() != counts.size())
    throw PreconditionError("sizes and counts must align");
  FitResult fit;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i > 0 && sizes[i] <= sizes[i - 1])
      throw PreconditionError("family sizes must be strictly increasing");
    if (counts[i] == 0) {
      ++fit.dropped_zero_counts;
      continue;
    }
    xs.push_back(std::log(static_cast<double>(sizes[i])));
    ys.push_back(std::log(static_cast<double>(counts[i])));
  }
  if (xs.size() < 3)
    throw PreconditionError("exponent fit needs at least 3 nonzero counts");
  fit.points_used = xs.size();
  const std::size_t m = xs.size();

  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  fit.exponent = sxy / sxx;
  double rss = 0;
  for (std::size_t i = 0; i < m; ++i) {
    double r = ys[i] - fit.exponent * xs[i];
    rss += r * r;
  }
  fit.exponent_stderr = m > 1 ? std::sqrt(rss / (static_cast<double>(m - 1) * sxx)) : 0;

  double mx = 0, my = 0;
  for (std::size_t i = 0; i < m; ++i) { mx += xs[i]; my += ys[i]; }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double cxx = 0, cxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    cxx += (xs[i] - mx) * (xs[i] - mx);
    cxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.affine_exponent = cxx > 0 ? cxy / cxx : 0;
  double arss = 0;
  for (std::size_t i = 0; i < m; ++i) {
    double r = ys[i] - my - fit.affine_exponent * (xs[i] - mx);
    arss += r * r;
  }
  fit.affine_stderr =
      (m > 2 && cxx > 0) ? std::sqrt(arss / (static_cast<double>(m - 2) * cxx)) : 0;
  return fit;
}

std::string bound_id_name(BoundId id) {
  switch (id) {
    case BoundId::SteinTomas: return "stein-tomas";
    case BoundId::RichLinesCrude: return "rich-lines-crude";
    case BoundId::RichLinesStrong: return "rich-lines-strong";
    case BoundId::GridUnion: return "grid-union";
    case BoundId::Vinh: return "vinh";
    case BoundId::StevensDeZeeuw: return "stevens-de-zeeuw";
  }
  return "?";
}

std::optional<BoundId> bound_id_parse(const std::string& name) {
  for (BoundId id : {BoundId::SteinTomas, BoundId::RichLinesCrude, BoundId::RichLinesStrong,
                     BoundId::GridUnion, BoundId::Vinh, BoundId::StevensDeZeeuw})
    if (bound_id_name(id) == name) return id;
  return std::nullopt;
}

namespace {

void sweep_rich_lines(const GeneratorSpec& spec, bool crude, SweepReport& rep) {
  PointSet2 A = generate_planar(spec);
  MultiplicityTable table = MultiplicityTable::build(A);
  const double n = static_cast<double>(A.size());
  const double p = static_cast<double>(A.modulus().p());
  for (u64 k = 2; k <= A.size(); k *= 2) {
    double kd = static_cast<double>(k);
    double measured = static_cast<double>(rich_lines(table, static_cast<u32>(k)).size());
    double bound = crude
        ? std::pow(n, 2.75) * std::pow(kd, -3.75) + std::pow(n, 1.25) / kd
        : std::pow(n, 2.75) * std::pow(kd, -3.75) + n / kd + std::pow(n, 6.5) * std::pow(p, -7.5);
    rep.instances.push_back({A.modulus().p(), A.size(), kd, measured, bound,
                             bound > 0 ? measured / bound : 0, ""});
  }
}

}  // namespace

SweepReport bound_sweep(std::span<const GeneratorSpec> family, BoundId bound) {
  SweepReport rep;
  rep.bound = bound_id_name(bound);
  rep.constants_version = kConstantsVersion;
  if (!family.empty()) {
    rep.spec = family.front().to_string();
    rep.seed = family.front().seed;
  }
  for (const GeneratorSpec& spec : family) {
    switch (bound) {
      case BoundId::SteinTomas: {
        auto support = generate_space(spec);
        PrimeModulus mod(spec.p);
        SpaceFunction g = SpaceFunction::indicator(mod, support);
        double measured = l2_sigma_norm(restriction(g));
        double gsz = static_cast<double>(support.size());
        double b = std::sqrt(gsz) + gsz / std::sqrt(static_cast<double>(mod.p()));
        rep.instances.push_back(
            {spec.p, support.size(), 0, measured, b, b > 0 ? measured / b : 0, "stein-tomas"});
        break;
      }
      case BoundId::RichLinesCrude:
        sweep_rich_lines(spec, true, rep);
        break;
      case BoundId::RichLinesStrong:
        sweep_rich_lines(spec, false, rep);
        break;
      case BoundId::GridUnion: {
        auto [B, grids] = generate_grid_union(spec);
        std::set<u64> thresholds{2, spec.k, 2 * spec.k};
        for (u64 j : thresholds) {
          if (j < 2 || j > B.size()) continue;
          BoundReport r = grid_union_rich_line_check(B, grids, static_cast<u32>(j));
          rep.instances.push_back(
              {spec.p, B.size(), r.param, r.measured, r.bound_value, r.ratio, ""});
        }
        break;
      }
      case BoundId::Vinh:
      case BoundId::StevensDeZeeuw: {
        PointSet2 A = generate_planar(spec);
        auto lines = rich_lines(A, 2);
        auto reports = verify_incidence_bounds(A, lines);
        const std::string want = bound == BoundId::Vinh ? "vinh" : "stevens_de_zeeuw";
        for (const BoundReport& r : reports)
          if (r.bound_id == want)
            rep.instances.push_back(
                {spec.p, A.size(), r.param, r.measured, r.bound_value, r.ratio, ""});
        break;
      }
    }
  }
  for (const SweepInstance& inst : rep.instances)
    rep.max_ratio = std::max(rep.max_ratio, inst.ratio);
  return rep;
}

}  // namespace ffgeom
