#pragma once

#include <cstdio>
#include <filesystem>
#include <string>

namespace testsupport {

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_text(const std::filesystem::path& path, const std::string& text);

/// xyz text for a lons x lats grid with elevation z(lon, lat) in meters.
template <class F>
std::string xyz_grid(double lon0, double lon1, std::size_t nlon, double lat0, double lat1, std::size_t nlat, F z) {
  std::string s;
  for (std::size_t j = 0; j < nlat; ++j)
    for (std::size_t i = 0; i < nlon; ++i) {
      const double lon = lon0 + (lon1 - lon0) * i / (nlon - 1);
      const double lat = lat0 + (lat1 - lat0) * j / (nlat - 1);
      char buf[128];
      std::snprintf(buf, sizeof buf, "%.10g %.10g %.10g\n", lon, lat, z(lon, lat));
      s += buf;
    }
  return s;
}

}  // namespace testsupport
