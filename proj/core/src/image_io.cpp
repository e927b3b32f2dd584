#include "spiral/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

namespace spiral {

namespace {

std::string next_token(std::istream& in) {
  std::string token;
  while (in >> token) {
    if (token[0] == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    return token;
  }
  throw std::runtime_error("read_pgm: truncated header");
}

std::size_t parse_size(const std::string& token) {
  std::size_t pos = 0;
  const unsigned long long v = std::stoull(token, &pos);
  if (pos != token.size()) throw std::runtime_error("read_pgm: bad header field '" + token + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace

std::filesystem::path pgm_sidecar_path(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".scale.txt");
}

Signal read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_pgm: cannot open " + path.string());
  const std::string magic = next_token(in);
  if (magic != "P2" && magic != "P5") throw std::runtime_error("read_pgm: unsupported magic " + magic);
  const std::size_t cols = parse_size(next_token(in));
  const std::size_t rows = parse_size(next_token(in));
  const std::size_t max_gray = parse_size(next_token(in));
  if (max_gray == 0 || max_gray > 65535) throw std::runtime_error("read_pgm: bad maxval");

  Vector values(rows * cols);
  if (magic == "P2") {
    for (double& v : values) v = static_cast<double>(parse_size(next_token(in)));
  } else {
    in.get();  // single whitespace after maxval
    const bool wide = max_gray > 255;
    for (double& v : values) {
      const int hi = in.get();
      if (!wide) {
        if (hi == EOF) throw std::runtime_error("read_pgm: truncated raster");
        v = static_cast<double>(hi);
        continue;
      }
      const int lo = in.get();
      if (lo == EOF) throw std::runtime_error("read_pgm: truncated raster");
      v = static_cast<double>((hi << 8) | lo);
    }
  }

  const auto sidecar = pgm_sidecar_path(path);
  if (std::filesystem::exists(sidecar)) {
    std::ifstream side(sidecar);
    std::string line;
    while (std::getline(side, line)) {
      if (line.rfind("scale=", 0) == 0) {
        const double scale = std::stod(line.substr(6));
        for (double& v : values) v *= scale;
      }
    }
  }
  return Signal(std::move(values), Shape{rows, cols});
}

double write_pgm(const std::filesystem::path& path, const Signal& image, PgmEncoding encoding,
                 int max_gray) {
  const Shape shape = image.image_shape();
  if (max_gray < 1 || max_gray > 65535) throw std::invalid_argument("write_pgm: bad max_gray");
  const double peak = std::max(0.0, max_value(image.values()));
  const double scale = peak > 0.0 ? peak / max_gray : 1.0;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_pgm: cannot open " + path.string());
  out << (encoding == PgmEncoding::kAscii ? "P2" : "P5") << '\n'
      << shape.cols << ' ' << shape.rows << '\n'
      << max_gray << '\n';
  for (std::size_t r = 0; r < shape.rows; ++r) {
    for (std::size_t c = 0; c < shape.cols; ++c) {
      const double v = image.values()[r * shape.cols + c];
      const long gray = std::clamp(std::lround(std::max(v, 0.0) / scale), 0L,
                                   static_cast<long>(max_gray));
      if (encoding == PgmEncoding::kAscii) {
        out << gray << (c + 1 == shape.cols ? '\n' : ' ');
      } else if (max_gray > 255) {
        out.put(static_cast<char>((gray >> 8) & 0xff));
        out.put(static_cast<char>(gray & 0xff));
      } else {
        out.put(static_cast<char>(gray));
      }
    }
  }
  if (!out) throw std::runtime_error("write_pgm: write failed for " + path.string());

  std::ofstream side(pgm_sidecar_path(path));
  side << std::setprecision(17) << "scale=" << scale << "\nmax_value=" << peak << '\n';
  return scale;
}

Signal read_csv_image(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv_image: cannot open " + path.string());
  Vector values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::stringstream row(line);
    std::string cell;
    std::size_t count = 0;
    while (std::getline(row, cell, ',')) {
      values.push_back(std::stod(cell));
      ++count;
    }
    if (rows == 0) cols = count;
    if (count != cols) throw std::runtime_error("read_csv_image: ragged rows in " + path.string());
    ++rows;
  }
  return Signal(std::move(values), Shape{rows, cols});
}

void write_csv_image(const std::filesystem::path& path, const Signal& image) {
  const Shape shape = image.image_shape();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv_image: cannot open " + path.string());
  out << std::setprecision(17);
  for (std::size_t r = 0; r < shape.rows; ++r) {
    for (std::size_t c = 0; c < shape.cols; ++c) {
      out << image.values()[r * shape.cols + c] << (c + 1 == shape.cols ? '\n' : ',');
    }
  }
}

Signal read_image(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return read_csv_image(path);
  return read_pgm(path);
}

void write_image(const std::filesystem::path& path, const Signal& image) {
  if (path.extension() == ".csv") {
    write_csv_image(path, image);
  } else {
    write_pgm(path, image);
  }
}

}  // namespace spiral
