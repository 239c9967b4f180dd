#include "gfflab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "gfflab/errors.hpp"

namespace gfflab::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string quote_if_needed(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) body_ += ',';
    body_ += quote_if_needed(header[i]);
  }
  body_ += '\n';
}

void CsvWriter::add_row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_)
    throw IoError("CsvWriter: row has " + std::to_string(fields.size()) +
                  " fields, header has " + std::to_string(columns_));
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) body_ += ',';
    body_ += quote_if_needed(fields[i]);
  }
  body_ += '\n';
}

std::string CsvWriter::str() const { return body_; }

void CsvWriter::write(const std::filesystem::path& path) const {
  write_text(body_, path);
}

PgmImage rasterize(const lattice::WiredDomain& domain, const std::vector<double>& values) {
  if (values.size() != static_cast<std::size_t>(domain.n()))
    throw IoError("rasterize: value count does not match domain");
  int x0 = domain.sites[0][0], x1 = x0, y0 = domain.sites[0][1], y1 = y0;
  for (const auto& s : domain.sites) {
    x0 = std::min(x0, s[0]);
    x1 = std::max(x1, s[0]);
    y0 = std::min(y0, s[1]);
    y1 = std::max(y1, s[1]);
  }
  PgmImage img;
  img.width = x1 - x0 + 1;
  img.height = y1 - y0 + 1;
  img.lo = *std::min_element(values.begin(), values.end());
  img.hi = *std::max_element(values.begin(), values.end());
  const double span = img.hi > img.lo ? img.hi - img.lo : 1.0;
  img.pixels.assign(static_cast<std::size_t>(img.width) * img.height, 0);
  for (int i = 0; i < domain.n(); ++i) {
    const int col = domain.sites[i][0] - x0;
    const int row = y1 - domain.sites[i][1];  // top row = largest iy
    const double g = std::round(255.0 * (values[i] - img.lo) / span);
    img.pixels[static_cast<std::size_t>(row) * img.width + col] =
        static_cast<std::uint8_t>(std::clamp(g, 0.0, 255.0));
  }
  return img;
}

void write_pgm(const PgmImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("write_pgm: cannot open " + path.string());
  out << "P5\n"
      << "# value_to_gray lo=" << format_double(image.lo)
      << " hi=" << format_double(image.hi) << " gray=round(255*(v-lo)/(hi-lo))\n"
      << image.width << " " << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
  if (!out) throw IoError("write_pgm: write failed for " + path.string());
}

void write_text(const std::string& content, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("write_text: cannot open " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write_text: write failed for " + path.string());
}

}  // namespace gfflab::io
