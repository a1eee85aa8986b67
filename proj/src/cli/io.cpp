#include "bbmwave/cli/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace bbmwave::cli {

std::string format_double(double x) {
  std::array<char, 32> buf;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw IoError("cannot format number");
  return std::string(buf.data(), ptr);
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

void write_vtk(std::ostream& out, const Mesh& mesh, const std::vector<NamedScalar>& scalars,
               const std::vector<NamedVector>& vectors, const std::string& title) {
  const std::size_t n = mesh.vertices.size();
  for (const auto& s : scalars)
    if (!s.values || s.values->size() != n) throw IoError("vtk: field '" + s.name + "' does not match the vertex count");
  for (const auto& v : vectors)
    if (!v.x || !v.y || v.x->size() != n || v.y->size() != n)
      throw IoError("vtk: field '" + v.name + "' does not match the vertex count");
  if (title.find('\n') != std::string::npos || title.size() > 255) throw IoError("vtk: invalid title");

  out << "# vtk DataFile Version 2.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << n << " double\n";
  for (const auto& v : mesh.vertices)
    out << format_double(v.position.x) << ' ' << format_double(v.position.y) << " 0\n";
  const std::size_t nt = mesh.triangles.size();
  out << "CELLS " << nt << ' ' << 4 * nt << '\n';
  for (const auto& t : mesh.triangles) out << "3 " << t.v[0] << ' ' << t.v[1] << ' ' << t.v[2] << '\n';
  out << "CELL_TYPES " << nt << '\n';
  for (std::size_t t = 0; t < nt; ++t) out << "5\n";
  if (scalars.empty() && vectors.empty()) return;
  out << "POINT_DATA " << n << '\n';
  for (const auto& s : scalars) {
    out << "SCALARS " << s.name << " double 1\nLOOKUP_TABLE default\n";
    for (double x : *s.values) out << format_double(x) << '\n';
  }
  for (const auto& v : vectors) {
    out << "VECTORS " << v.name << " double\n";
    for (std::size_t i = 0; i < n; ++i) out << format_double((*v.x)[i]) << ' ' << format_double((*v.y)[i]) << " 0\n";
  }
}

void write_vtk_file(const std::filesystem::path& path, const Mesh& mesh, const std::vector<NamedScalar>& scalars,
                    const std::vector<NamedVector>& vectors, const std::string& title) {
  auto out = open_output(path);
  write_vtk(out, mesh, scalars, vectors, title);
  finish(out, path);
}

namespace {

class VtkTokens {
 public:
  explicit VtkTokens(std::istream& in) : in_(in) {}

  std::string word(const char* what) {
    std::string w;
    if (!(in_ >> w)) throw IoError(std::string("vtk: unexpected end of file, expected ") + what);
    return w;
  }

  void expect(const std::string& keyword) {
    const auto w = word(keyword.c_str());
    if (w != keyword) throw IoError("vtk: expected " + keyword + ", found '" + w + "'");
  }

  double number() {
    const auto w = word("a number");
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), x);
    if (ec != std::errc() || ptr != w.data() + w.size()) throw IoError("vtk: invalid number '" + w + "'");
    return x;
  }

  std::size_t count() {
    const auto w = word("a count");
    std::size_t x = 0;
    const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), x);
    if (ec != std::errc() || ptr != w.data() + w.size()) throw IoError("vtk: invalid count '" + w + "'");
    return x;
  }

  bool at_end() {
    in_ >> std::ws;
    return in_.peek() == std::char_traits<char>::eof();
  }

 private:
  std::istream& in_;
};

}  // namespace

VtkData read_vtk(std::istream& in) {
  VtkData data;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# vtk DataFile Version", 0) != 0) throw IoError("vtk: missing header line");
  if (!std::getline(in, data.title)) throw IoError("vtk: missing title line");
  VtkTokens tok(in);
  tok.expect("ASCII");
  tok.expect("DATASET");
  tok.expect("UNSTRUCTURED_GRID");
  tok.expect("POINTS");
  const std::size_t n = tok.count();
  tok.word("a data type");
  data.mesh.vertices.resize(n);
  for (auto& v : data.mesh.vertices) {
    v.position.x = tok.number();
    v.position.y = tok.number();
    tok.number();
  }
  tok.expect("CELLS");
  const std::size_t nt = tok.count();
  if (tok.count() != 4 * nt) throw IoError("vtk: only triangle cells are supported");
  data.mesh.triangles.resize(nt);
  for (auto& t : data.mesh.triangles) {
    if (tok.count() != 3) throw IoError("vtk: only triangle cells are supported");
    for (auto& idx : t.v) {
      idx = tok.count();
      if (idx >= n) throw IoError("vtk: cell references a missing point");
    }
  }
  tok.expect("CELL_TYPES");
  if (tok.count() != nt) throw IoError("vtk: CELL_TYPES count mismatch");
  for (std::size_t t = 0; t < nt; ++t)
    if (tok.count() != 5) throw IoError("vtk: cell type other than triangle");
  if (tok.at_end()) return data;
  tok.expect("POINT_DATA");
  if (tok.count() != n) throw IoError("vtk: POINT_DATA count mismatch");
  while (!tok.at_end()) {
    const auto kind = tok.word("SCALARS or VECTORS");
    const auto name = tok.word("a field name");
    tok.word("a data type");
    if (kind == "SCALARS") {
      if (tok.count() != 1) throw IoError("vtk: only single-component scalars are supported");
      tok.expect("LOOKUP_TABLE");
      tok.word("a lookup table name");
      Vector values(n);
      for (auto& x : values) x = tok.number();
      data.scalars[name] = std::move(values);
    } else if (kind == "VECTORS") {
      Vector x(n), y(n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = tok.number();
        y[i] = tok.number();
        tok.number();
      }
      data.vectors[name] = {std::move(x), std::move(y)};
    } else {
      throw IoError("vtk: unsupported section '" + kind + "'");
    }
  }
  return data;
}

VtkData read_vtk_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return read_vtk(in);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  auto write_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  };
  write_row(header);
  for (const auto& r : rows) {
    if (r.size() != header.size()) throw IoError("csv: row width does not match the header");
    write_row(r);
  }
}

void write_csv_file(const std::filesystem::path& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows) {
  auto out = open_output(path);
  write_csv(out, header, rows);
  finish(out, path);
}

void write_mass_csv(const std::filesystem::path& path, const std::vector<std::pair<double, double>>& mass) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(mass.size());
  for (const auto& [t, m] : mass) rows.push_back({format_double(t), format_double(m)});
  write_csv_file(path, {"t", "mass"}, rows);
}

void write_gauges_csv(const std::filesystem::path& path, const std::vector<Point2>& points,
                      const std::vector<std::vector<GaugeSample>>& series) {
  std::size_t samples = 0;
  for (const auto& s : series) samples = std::max(samples, s.size());
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < samples; ++k) {
    for (std::size_t g = 0; g < series.size(); ++g) {
      if (k >= series[g].size()) continue;
      const auto& s = series[g][k];
      rows.push_back({format_double(s.t), std::to_string(g), format_double(points[g].x), format_double(points[g].y),
                      format_double(s.eta), format_double(s.u), format_double(s.v)});
    }
  }
  write_csv_file(path, {"t", "gauge", "x", "y", "eta", "u", "v"}, rows);
}

}  // namespace bbmwave::cli
