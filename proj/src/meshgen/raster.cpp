#include <cctype>
#include <fstream>
#include <istream>
#include <string>

#include "bbmwave/meshgen.hpp"

namespace bbmwave {

namespace {

// Next whitespace-delimited token, skipping '#' comments.
std::string next_token(std::istream& in) {
  std::string token;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n' && c != '\r') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  while (c != EOF && !std::isspace(c) && c != '#') {
    token.push_back(static_cast<char>(c));
    c = in.get();
  }
  if (c == '#') in.unget();
  return token;
}

unsigned long parse_unsigned(const std::string& token, const char* what) {
  if (token.empty()) throw MeshgenError(std::string("pgm: truncated header, missing ") + what);
  for (char ch : token)
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw MeshgenError(std::string("pgm: invalid ") + what + " '" + token + "'");
  try {
    return std::stoul(token);
  } catch (const std::exception&) {
    throw MeshgenError(std::string("pgm: invalid ") + what + " '" + token + "'");
  }
}

}  // namespace

Raster read_pgm(std::istream& in) {
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (in.gcount() != 2 || magic[0] != 'P' || (magic[1] != '2' && magic[1] != '5'))
    throw MeshgenError("pgm: bad magic number (expected P2 or P5)");
  const bool binary = magic[1] == '5';

  Raster r;
  r.width = parse_unsigned(next_token(in), "width");
  r.height = parse_unsigned(next_token(in), "height");
  const auto maxval = parse_unsigned(next_token(in), "maxval");
  if (maxval < 1 || maxval > 65535) throw MeshgenError("pgm: maxval out of range 1..65535");
  r.maxval = static_cast<std::uint32_t>(maxval);
  if (r.width == 0 || r.height == 0) throw MeshgenError("pgm: empty image");

  const std::size_t count = r.width * r.height;
  r.pixels.resize(count);
  if (binary) {
    // next_token consumed exactly one whitespace byte after maxval.
    const std::size_t bytes_per_sample = r.maxval > 255 ? 2 : 1;
    std::string payload(count * bytes_per_sample, '\0');
    in.read(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (static_cast<std::size_t>(in.gcount()) != payload.size())
      throw MeshgenError("pgm: truncated payload, expected " + std::to_string(payload.size()) + " bytes, got " +
                         std::to_string(in.gcount()));
    for (std::size_t i = 0; i < count; ++i) {
      const auto* p = reinterpret_cast<const unsigned char*>(payload.data()) + i * bytes_per_sample;
      r.pixels[i] = bytes_per_sample == 2 ? static_cast<std::uint16_t>((p[0] << 8) | p[1]) : p[0];
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const auto token = next_token(in);
      if (token.empty())
        throw MeshgenError("pgm: truncated payload, expected " + std::to_string(count) + " samples, got " +
                           std::to_string(i));
      r.pixels[i] = static_cast<std::uint16_t>(std::min<unsigned long>(parse_unsigned(token, "sample"), 65536));
    }
  }
  for (auto v : r.pixels)
    if (v > r.maxval) throw MeshgenError("pgm: sample exceeds maxval");
  return r;
}

Raster read_pgm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MeshgenError("cannot open pgm file '" + path + "'");
  return read_pgm(in);
}

double LevelGrid::cell_size() const {
  double h = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) h = std::max(h, xs[i] - xs[i - 1]);
  for (std::size_t i = 1; i < ys.size(); ++i) h = std::max(h, ys[i] - ys[i - 1]);
  return h;
}

LevelGrid raster_to_level(const Raster& raster, const RasterLevelOptions& options) {
  if (!(options.pixel_size > 0.0)) throw MeshgenError("raster_to_level: pixel size must be positive");
  LevelGrid level;
  level.xs.resize(raster.width);
  level.ys.resize(raster.height);
  for (std::size_t c = 0; c < raster.width; ++c) level.xs[c] = (static_cast<double>(c) + 0.5) * options.pixel_size;
  for (std::size_t r = 0; r < raster.height; ++r) level.ys[r] = (static_cast<double>(r) + 0.5) * options.pixel_size;
  level.values.resize(raster.width * raster.height);
  for (std::size_t iy = 0; iy < raster.height; ++iy) {
    const std::size_t row = raster.height - 1 - iy;
    for (std::size_t ix = 0; ix < raster.width; ++ix) {
      const double intensity = raster.at(row, ix);
      const double diff = intensity - options.wet_threshold;
      level.values[iy * raster.width + ix] = options.wet_is_dark ? diff : -diff;
    }
  }
  return level;
}

LevelGrid bathy_to_level(const PlanarGrid& grid) { return {grid.xs, grid.ys, grid.z}; }

}  // namespace bbmwave
