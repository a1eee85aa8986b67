#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bbmwave/mesh.hpp"

namespace bbmwave {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-blank line split into tokens; false at end of stream.
  bool next(std::vector<std::string_view>& tokens) {
    while (std::getline(in_, line_)) {
      ++number_;
      tokens.clear();
      std::size_t pos = 0;
      while (pos < line_.size()) {
        while (pos < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos]))) ++pos;
        const std::size_t start = pos;
        while (pos < line_.size() && !std::isspace(static_cast<unsigned char>(line_[pos]))) ++pos;
        if (pos > start) tokens.emplace_back(line_.data() + start, pos - start);
      }
      if (!tokens.empty()) return true;
    }
    return false;
  }

  std::size_t line() const { return number_; }

 private:
  std::istream& in_;
  std::string line_;
  std::size_t number_ = 0;
};

template <typename T>
T parse_number(std::string_view token, std::size_t line, const char* what) {
  T value{};
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw MeshFormatError(line, std::string("cannot parse ") + what + " '" + std::string(token) + "'");
  return value;
}

std::size_t parse_index(std::string_view token, std::size_t line, std::size_t count) {
  const auto one_based = parse_number<long long>(token, line, "vertex index");
  if (one_based < 1 || static_cast<unsigned long long>(one_based) > count)
    throw MeshFormatError(line, "vertex index " + std::string(token) + " out of range 1.." +
                                    std::to_string(count));
  return static_cast<std::size_t>(one_based - 1);
}

void expect_tokens(const std::vector<std::string_view>& tokens, std::size_t n, std::size_t line,
                   const char* what) {
  if (tokens.size() != n)
    throw MeshFormatError(line, std::string("expected ") + std::to_string(n) + " fields for " + what +
                                    ", found " + std::to_string(tokens.size()));
}

void append_number(std::string& out, double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, ptr);
}

}  // namespace

Mesh read_msh(std::istream& in) {
  LineReader reader(in);
  std::vector<std::string_view> tok;
  if (!reader.next(tok)) throw MeshFormatError(reader.line() + 1, "missing header \"nv nt ne\"");
  expect_tokens(tok, 3, reader.line(), "header");
  const std::size_t header_line = reader.line();
  const auto nv = parse_number<std::size_t>(tok[0], header_line, "vertex count");
  const auto nt = parse_number<std::size_t>(tok[1], header_line, "triangle count");
  const auto ne = parse_number<std::size_t>(tok[2], header_line, "edge count");

  Mesh mesh;
  mesh.vertices.reserve(nv);
  mesh.triangles.reserve(nt);
  mesh.boundary_edges.reserve(ne);
  std::vector<std::size_t> triangle_lines;
  std::vector<std::size_t> edge_lines;
  std::vector<std::size_t> vertex_lines;

  auto require_line = [&](const char* what) {
    if (!reader.next(tok))
      throw MeshFormatError(reader.line() + 1, std::string("unexpected end of file, expected ") + what);
  };

  for (std::size_t i = 0; i < nv; ++i) {
    require_line("a vertex line");
    expect_tokens(tok, 3, reader.line(), "a vertex");
    const double x = parse_number<double>(tok[0], reader.line(), "coordinate");
    const double y = parse_number<double>(tok[1], reader.line(), "coordinate");
    const int label = parse_number<int>(tok[2], reader.line(), "label");
    mesh.vertices.push_back({{x, y}, label});
    vertex_lines.push_back(reader.line());
  }
  for (std::size_t t = 0; t < nt; ++t) {
    require_line("a triangle line");
    expect_tokens(tok, 4, reader.line(), "a triangle");
    Triangle tri;
    for (int k = 0; k < 3; ++k) tri.v[k] = parse_index(tok[k], reader.line(), nv);
    tri.region = parse_number<int>(tok[3], reader.line(), "region");
    const auto [p0, p1, p2] = std::array{mesh.point(tri.v[0]), mesh.point(tri.v[1]), mesh.point(tri.v[2])};
    if (signed_area2(p0, p1, p2) < 0.0) std::swap(tri.v[1], tri.v[2]);
    mesh.triangles.push_back(tri);
    triangle_lines.push_back(reader.line());
  }
  for (std::size_t e = 0; e < ne; ++e) {
    require_line("a boundary edge line");
    expect_tokens(tok, 3, reader.line(), "a boundary edge");
    BoundaryEdge be;
    be.v[0] = parse_index(tok[0], reader.line(), nv);
    be.v[1] = parse_index(tok[1], reader.line(), nv);
    be.label = parse_number<int>(tok[2], reader.line(), "label");
    mesh.boundary_edges.push_back(be);
    edge_lines.push_back(reader.line());
  }
  if (reader.next(tok)) throw MeshFormatError(reader.line(), "unexpected trailing data");

  const auto violations = validate(mesh);
  if (!violations.empty()) {
    using Kind = Violation::Kind;
    const auto& v = violations.front();
    std::size_t line = header_line;
    switch (v.kind) {
      case Kind::non_finite_vertex:
      case Kind::negative_label:
      case Kind::orphan_vertex:
        line = vertex_lines[v.index];
        break;
      case Kind::boundary_edge_index_out_of_range:
      case Kind::boundary_edge_not_on_boundary:
        line = edge_lines[v.index];
        break;
      default:
        line = triangle_lines[v.index];
        break;
    }
    throw MeshFormatError(line, v.message);
  }
  return mesh;
}

Mesh read_msh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file '" + path + "'");
  return read_msh(in);
}

std::string write_msh(const Mesh& mesh) {
  std::string out;
  out += std::to_string(mesh.vertices.size()) + ' ' + std::to_string(mesh.triangles.size()) + ' ' +
         std::to_string(mesh.boundary_edges.size()) + '\n';
  for (const auto& v : mesh.vertices) {
    append_number(out, v.position.x);
    out += ' ';
    append_number(out, v.position.y);
    out += ' ' + std::to_string(v.label) + '\n';
  }
  for (const auto& t : mesh.triangles) {
    out += std::to_string(t.v[0] + 1) + ' ' + std::to_string(t.v[1] + 1) + ' ' + std::to_string(t.v[2] + 1) +
           ' ' + std::to_string(t.region) + '\n';
  }
  for (const auto& e : mesh.boundary_edges)
    out += std::to_string(e.v[0] + 1) + ' ' + std::to_string(e.v[1] + 1) + ' ' + std::to_string(e.label) + '\n';
  return out;
}

void write_msh(std::ostream& out, const Mesh& mesh) { out << write_msh(mesh); }

void write_msh_file(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MeshError("cannot write mesh file '" + path + "'");
  write_msh(out, mesh);
  if (!out) throw MeshError("error while writing mesh file '" + path + "'");
}

}  // namespace bbmwave
