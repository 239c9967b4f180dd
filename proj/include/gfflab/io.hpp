#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gfflab/lattice.hpp"

namespace gfflab::io {

// "%.17g" round-trip formatting for every floating-point field.
std::string format_double(double v);

// RFC-4180-style CSV: header row, fields quoted when they contain commas,
// quotes or newlines, UTF-8, LF line ends.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void add_row(const std::vector<std::string>& fields);
  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::size_t columns_;
  std::string body_;
};

// Binary P5 with a one-line comment recording the affine value -> gray map.
struct PgmImage {
  int width = 0;
  int height = 0;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::uint8_t> pixels;  // row-major, top row = largest iy
};

// Rasterizes per-site values onto the domain bounding box; absent sites map
// to gray 0.
PgmImage rasterize(const lattice::WiredDomain& domain, const std::vector<double>& values);

void write_pgm(const PgmImage& image, const std::filesystem::path& path);

void write_text(const std::string& content, const std::filesystem::path& path);

}  // namespace gfflab::io
