#include "ffgeom/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace ffgeom {

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot open " + path + " for writing");
  return out;
}

struct Header {
  u64 p = 0;
  int dim = 0;
};

// Skips blanks and '#' comments; tracks line numbers for diagnostics.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}
  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      auto start = line.find_first_not_of(" \t\r");
      if (start == std::string::npos || line[start] == '#') continue;
      return true;
    }
    return false;
  }
  std::size_t line_no() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

Header read_header(LineReader& reader) {
  std::string line;
  if (!reader.next(line)) throw PreconditionError("empty point-set file");
  std::istringstream is(line);
  std::string tag_p, tag_dim;
  Header h;
  if (!(is >> tag_p >> h.p >> tag_dim >> h.dim) || tag_p != "p" || tag_dim != "dim" ||
      (h.dim != 2 && h.dim != 3))
    throw PreconditionError("bad header on line " + std::to_string(reader.line_no()) +
                            ": expected 'p <prime> dim <2|3>'");
  return h;
}

u64 read_coord(std::istringstream& is, const PrimeModulus& m, std::size_t line_no) {
  u64 v;
  if (!(is >> v))
    throw PreconditionError("malformed point on line " + std::to_string(line_no));
  if (v >= m.p())
    throw PreconditionError("coordinate " + std::to_string(v) + " on line " +
                            std::to_string(line_no) + " is not a residue mod " +
                            std::to_string(m.p()));
  return v;
}

}  // namespace

PointSet2 load_point_set(std::istream& in) {
  LineReader reader(in);
  Header h = read_header(reader);
  if (h.dim != 2) throw PreconditionError("expected a dim 2 point-set file");
  PrimeModulus m(h.p);
  std::vector<Vec2> pts;
  std::string line;
  while (reader.next(line)) {
    std::istringstream is(line);
    Vec2 pt;
    pt.x = static_cast<u32>(read_coord(is, m, reader.line_no()));
    pt.y = static_cast<u32>(read_coord(is, m, reader.line_no()));
    std::string rest;
    if (is >> rest)
      throw PreconditionError("trailing tokens on line " + std::to_string(reader.line_no()));
    pts.push_back(pt);
  }
  return PointSet2(m, std::move(pts));
}

PointSet2 load_point_set_file(const std::string& path) {
  auto in = open_input(path);
  try {
    return load_point_set(in);
  } catch (const PreconditionError& e) {
    throw PreconditionError(path + ": " + e.what());
  }
}

void save_point_set(std::ostream& out, const PointSet2& A) {
  out << "p " << A.modulus().p() << " dim 2\n";
  for (const Vec2& pt : A.points()) out << pt.x << ' ' << pt.y << '\n';
}

void save_point_set_file(const std::string& path, const PointSet2& A) {
  auto out = open_output(path);
  save_point_set(out, A);
}

std::pair<PrimeModulus, std::vector<Vec3>> load_space_points(std::istream& in) {
  LineReader reader(in);
  Header h = read_header(reader);
  if (h.dim != 3) throw PreconditionError("expected a dim 3 point-set file");
  PrimeModulus m(h.p);
  std::vector<Vec3> pts;
  std::string line;
  while (reader.next(line)) {
    std::istringstream is(line);
    Vec3 pt;
    pt.x = static_cast<u32>(read_coord(is, m, reader.line_no()));
    pt.y = static_cast<u32>(read_coord(is, m, reader.line_no()));
    pt.z = static_cast<u32>(read_coord(is, m, reader.line_no()));
    pts.push_back(pt);
  }
  std::sort(pts.begin(), pts.end());
  if (std::adjacent_find(pts.begin(), pts.end()) != pts.end())
    throw PreconditionError("duplicate space point");
  return {m, std::move(pts)};
}

std::pair<PrimeModulus, std::vector<Vec3>> load_space_points_file(const std::string& path) {
  auto in = open_input(path);
  try {
    return load_space_points(in);
  } catch (const PreconditionError& e) {
    throw PreconditionError(path + ": " + e.what());
  }
}

void save_space_points(std::ostream& out, const PrimeModulus& m, std::span<const Vec3> pts) {
  out << "p " << m.p() << " dim 3\n";
  for (const Vec3& pt : pts) out << pt.x << ' ' << pt.y << ' ' << pt.z << '\n';
}

SurfaceFunction load_surface_function(std::istream& in) {
  LineReader reader(in);
  Header h = read_header(reader);
  if (h.dim != 2) throw PreconditionError("surface functions use dim 2 files");
  PrimeModulus m(h.p);
  std::vector<std::pair<Vec2, cplx>> vals;
  std::string line;
  while (reader.next(line)) {
    std::istringstream is(line);
    Vec2 pt;
    pt.x = static_cast<u32>(read_coord(is, m, reader.line_no()));
    pt.y = static_cast<u32>(read_coord(is, m, reader.line_no()));
    double re, im;
    if (!(is >> re >> im))
      throw PreconditionError("missing value on line " + std::to_string(reader.line_no()));
    vals.emplace_back(pt, cplx{re, im});
  }
  return SurfaceFunction(m, std::move(vals));
}

SurfaceFunction load_surface_function_file(const std::string& path) {
  auto in = open_input(path);
  try {
    return load_surface_function(in);
  } catch (const PreconditionError& e) {
    throw PreconditionError(path + ": " + e.what());
  }
}

void save_surface_function(std::ostream& out, const SurfaceFunction& f) {
  out << "p " << f.modulus().p() << " dim 2\n";
  out << std::setprecision(17);
  for (const auto& [pt, v] : f.entries())
    out << pt.x << ' ' << pt.y << ' ' << v.real() << ' ' << v.imag() << '\n';
}

SpaceFunction load_space_function(std::istream& in) {
  LineReader reader(in);
  Header h = read_header(reader);
  if (h.dim != 3) throw PreconditionError("space functions use dim 3 files");
  PrimeModulus m(h.p);
  std::vector<std::pair<Vec3, cplx>> vals;
  std::string line;
  while (reader.next(line)) {
    std::istringstream is(line);
    Vec3 pt;
    pt.x = static_cast<u32>(read_coord(is, m, reader.line_no()));
    pt.y = static_cast<u32>(read_coord(is, m, reader.line_no()));
    pt.z = static_cast<u32>(read_coord(is, m, reader.line_no()));
    double re, im;
    if (!(is >> re >> im))
      throw PreconditionError("missing value on line " + std::to_string(reader.line_no()));
    vals.emplace_back(pt, cplx{re, im});
  }
  return SpaceFunction::sparse(m, std::move(vals));
}

SpaceFunction load_space_function_file(const std::string& path) {
  auto in = open_input(path);
  try {
    return load_space_function(in);
  } catch (const PreconditionError& e) {
    throw PreconditionError(path + ": " + e.what());
  }
}

void save_space_function(std::ostream& out, const SpaceFunction& g) {
  out << "p " << g.modulus().p() << " dim 3\n";
  out << std::setprecision(17);
  for (const auto& [pt, v] : g.support_entries())
    out << pt.x << ' ' << pt.y << ' ' << pt.z << ' ' << v.real() << ' ' << v.imag() << '\n';
}

void save_space_function_file(const std::string& path, const SpaceFunction& g) {
  auto out = open_output(path);
  save_space_function(out, g);
}

void save_decomposition(std::ostream& out, const PrimeModulus& m, const GreedyDecomposition& d) {
  out << "decomposition v1\n";
  out << "p " << m.p() << '\n';
  out << std::setprecision(17);
  out << "params k " << d.params.k << " levels " << d.params.levels << " floor "
      << d.params.density_floor << '\n';
  for (const LevelPart& part : d.parts) {
    out << "level " << part.level << " grids " << part.grids.size() << " points "
        << part.points.size() << '\n';
    for (const SelectedGrid& sg : part.grids) {
      out << "grid dir " << sg.grid.dir.x << ' ' << sg.grid.dir.y << " perp " << sg.grid.perp.x
          << ' ' << sg.grid.perp.y << " selected " << sg.selected_count << '\n';
      out << "rows";
      for (u32 c : sg.grid.row_cs) out << ' ' << c;
      out << '\n';
      out << "cols";
      for (u32 c : sg.grid.col_cs) out << ' ' << c;
      out << '\n';
    }
    for (const Vec2& pt : part.points) out << pt.x << ' ' << pt.y << '\n';
  }
  out << "aprime " << d.a_prime.size() << '\n';
  for (const Vec2& pt : d.a_prime) out << pt.x << ' ' << pt.y << '\n';
  out << "end\n";
}

void save_decomposition_file(const std::string& path, const PrimeModulus& m,
                             const GreedyDecomposition& d) {
  auto out = open_output(path);
  save_decomposition(out, m, d);
}

std::pair<PrimeModulus, GreedyDecomposition> load_decomposition(std::istream& in) {
  LineReader reader(in);
  std::string line;
  auto fail = [&](const std::string& why) {
    return PreconditionError("bad decomposition dump (line " +
                             std::to_string(reader.line_no()) + "): " + why);
  };
  if (!reader.next(line) || line != "decomposition v1") throw fail("missing version header");
  if (!reader.next(line)) throw fail("missing modulus");
  std::istringstream is(line);
  std::string tag;
  u64 p;
  if (!(is >> tag >> p) || tag != "p") throw fail("expected 'p <prime>'");
  PrimeModulus m(p);
  GreedyDecomposition d;
  if (!reader.next(line)) throw fail("missing params");
  {
    std::istringstream ps(line);
    std::string t0, t1, t2, t3;
    if (!(ps >> t0 >> t1 >> d.params.k >> t2 >> d.params.levels >> t3 >>
          d.params.density_floor) ||
        t0 != "params" || t1 != "k" || t2 != "levels" || t3 != "floor")
      throw fail("expected 'params k .. levels .. floor ..'");
  }
  while (reader.next(line)) {
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "level") {
      LevelPart part;
      std::string tg, tp;
      std::size_t n_grids, n_points;
      if (!(ls >> part.level >> tg >> n_grids >> tp >> n_points) || tg != "grids" ||
          tp != "points")
        throw fail("expected 'level <i> grids <n> points <n>'");
      for (std::size_t gi = 0; gi < n_grids; ++gi) {
        if (!reader.next(line)) throw fail("missing grid line");
        std::istringstream gs(line);
        std::string t0, t1, t2;
        Grid g;
        SelectedGrid sg;
        if (!(gs >> t0 >> t1 >> g.dir.x >> g.dir.y >> t2 >> g.perp.x >> g.perp.y) ||
            t0 != "grid" || t1 != "dir" || t2 != "perp")
          throw fail("expected 'grid dir .. perp ..'");
        std::string t3;
        if (!(gs >> t3 >> sg.selected_count) || t3 != "selected")
          throw fail("expected 'selected <count>'");
        Grid canon = Grid::from_offsets(m, g.dir, {}, {});
        g.row_normal = canon.row_normal;
        g.col_normal = canon.col_normal;
        if (!reader.next(line) || line.rfind("rows", 0) != 0) throw fail("missing rows");
        {
          std::istringstream rs(line.substr(4));
          u32 c;
          while (rs >> c) g.row_cs.push_back(c);
        }
        if (!reader.next(line) || line.rfind("cols", 0) != 0) throw fail("missing cols");
        {
          std::istringstream cs(line.substr(4));
          u32 c;
          while (cs >> c) g.col_cs.push_back(c);
        }
        std::sort(g.row_cs.begin(), g.row_cs.end());
        std::sort(g.col_cs.begin(), g.col_cs.end());
        sg.grid = std::move(g);
        part.grids.push_back(std::move(sg));
      }
      for (std::size_t pi = 0; pi < n_points; ++pi) {
        if (!reader.next(line)) throw fail("missing part point");
        std::istringstream vs(line);
        Vec2 pt;
        pt.x = static_cast<u32>(read_coord(vs, m, reader.line_no()));
        pt.y = static_cast<u32>(read_coord(vs, m, reader.line_no()));
        part.points.push_back(pt);
      }
      d.parts.push_back(std::move(part));
    } else if (kw == "aprime") {
      std::size_t n_points;
      if (!(ls >> n_points)) throw fail("expected 'aprime <n>'");
      for (std::size_t pi = 0; pi < n_points; ++pi) {
        if (!reader.next(line)) throw fail("missing residual point");
        std::istringstream vs(line);
        Vec2 pt;
        pt.x = static_cast<u32>(read_coord(vs, m, reader.line_no()));
        pt.y = static_cast<u32>(read_coord(vs, m, reader.line_no()));
        d.a_prime.push_back(pt);
      }
    } else if (kw == "end") {
      return {m, std::move(d)};
    } else {
      throw fail("unexpected keyword '" + kw + "'");
    }
  }
  throw fail("missing 'end'");
}

std::pair<PrimeModulus, GreedyDecomposition> load_decomposition_file(const std::string& path) {
  auto in = open_input(path);
  try {
    return load_decomposition(in);
  } catch (const PreconditionError& e) {
    throw PreconditionError(path + ": " + e.what());
  }
}

}  // namespace ffgeom
