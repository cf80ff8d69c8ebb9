#include "stcf/pgm.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace stcf {

Vec GrayImage::to_unit() const {
  Vec v(static_cast<Eigen::Index>(pixels.size()));
  for (std::size_t i = 0; i < pixels.size(); ++i) v(static_cast<Eigen::Index>(i)) = pixels[i] / double(maxval);
  return v;
}

GrayImage GrayImage::from_unit(const Vec& v, std::size_t width, std::size_t height) {
  if (static_cast<std::size_t>(v.size()) != width * height) throw PgmError("pixel count does not match dimensions");
  GrayImage img;
  img.width = width;
  img.height = height;
  img.pixels.resize(width * height);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    const double s = std::floor(v(static_cast<Eigen::Index>(i)) * 255.0 + 0.5);
    img.pixels[i] = static_cast<std::uint8_t>(std::clamp(s, 0.0, 255.0));
  }
  return img;
}

namespace {

// Reads one header integer, skipping whitespace and '#' comments.
long next_header_int(const std::string& s, std::size_t& pos) {
  for (;;) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos < s.size() && s[pos] == '#') {
      while (pos < s.size() && s[pos] != '\n' && s[pos] != '\r') ++pos;
      continue;
    }
    break;
  }
  const std::size_t start = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos == start) throw PgmError("malformed PGM header");
  if (pos - start > 9) throw PgmError("PGM header value too large");
  return std::stol(s.substr(start, pos - start));
}

}  // namespace

GrayImage parse_pgm(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') throw PgmError("not a binary PGM (P5) file");
  std::size_t pos = 2;
  GrayImage img;
  const long w = next_header_int(bytes, pos);
  const long h = next_header_int(bytes, pos);
  const long maxval = next_header_int(bytes, pos);
  if (w <= 0 || h <= 0) throw PgmError("PGM dimensions must be positive");
  if (maxval <= 0 || maxval > 255) throw PgmError("only 8-bit PGM (maxval 1..255) is supported");
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    throw PgmError("missing whitespace after PGM maxval");
  }
  ++pos;
  img.width = static_cast<std::size_t>(w);
  img.height = static_cast<std::size_t>(h);
  img.maxval = static_cast<int>(maxval);
  const std::size_t n = img.width * img.height;
  if (bytes.size() - pos < n) throw PgmError("PGM raster is truncated");
  img.header = bytes.substr(0, pos);
  img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                    bytes.begin() + static_cast<std::ptrdiff_t>(pos + n));
  for (auto p : img.pixels) {
    if (p > img.maxval) throw PgmError("pixel value exceeds maxval");
  }
  return img;
}

std::string format_pgm(const GrayImage& img) {
  if (img.pixels.size() != img.width * img.height) throw PgmError("pixel count does not match dimensions");
  std::string out = img.header;
  if (out.empty()) {
    out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n" +
          std::to_string(img.maxval) + "\n";
  }
  out.append(img.pixels.begin(), img.pixels.end());
  return out;
}

GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PgmError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_pgm(ss.str());
}

void write_pgm(const std::string& path, const GrayImage& img) { write_file_atomic(path, format_pgm(img)); }

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename into '" + path + "': " + ec.message());
  }
}

}  // namespace stcf
