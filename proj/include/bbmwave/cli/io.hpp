#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbmwave/linalg.hpp"
#include "bbmwave/mesh.hpp"
#include "bbmwave/simulate.hpp"

namespace bbmwave::cli {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

struct NamedScalar {
  std::string name;
  const Vector* values;
};

struct NamedVector {
  std::string name;
  const Vector* x;
  const Vector* y;
};

/// Legacy ASCII VTK unstructured grid of triangles with point data.
void write_vtk(std::ostream& out, const Mesh& mesh, const std::vector<NamedScalar>& scalars,
               const std::vector<NamedVector>& vectors, const std::string& title = "bbmwave");
void write_vtk_file(const std::filesystem::path& path, const Mesh& mesh, const std::vector<NamedScalar>& scalars,
                    const std::vector<NamedVector>& vectors, const std::string& title = "bbmwave");

/// Contents of a file written by write_vtk.
struct VtkData {
  std::string title;
  Mesh mesh;  // vertices and triangles only; labels are not stored in VTK
  std::map<std::string, Vector> scalars;
  std::map<std::string, std::pair<Vector, Vector>> vectors;
};

VtkData read_vtk(std::istream& in);
VtkData read_vtk_file(const std::filesystem::path& path);

/// Header row, then one comma-separated record per row.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);
void write_csv_file(const std::filesystem::path& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows);

/// Columns t,mass.
void write_mass_csv(const std::filesystem::path& path, const std::vector<std::pair<double, double>>& mass);
/// Columns t,gauge,x,y,eta,u,v, ordered by time then gauge index.
void write_gauges_csv(const std::filesystem::path& path, const std::vector<Point2>& points,
                      const std::vector<std::vector<GaugeSample>>& series);

}  // namespace bbmwave::cli
