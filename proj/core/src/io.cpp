#include "g0/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace g0::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

std::optional<double> parse_looks_comment(const std::string& line) {
  std::istringstream ss(line);
  std::string hash, key;
  double value;
  if (ss >> hash >> key >> value && hash == "#" && key == "looks") return value;
  return std::nullopt;
}

std::optional<double> parse_scale_comment(const std::string& line) {
  std::istringstream ss(line);
  std::string hash, key;
  double value;
  if (ss >> hash >> key >> value && hash == "#" && key == "scale") return value;
  return std::nullopt;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw std::runtime_error("not a number: '" + text + "'");
  }
  return value;
}

void write_sample_csv(const std::string& path, const std::vector<double>& values,
                      std::optional<double> looks) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  if (looks) out << "# looks " << format_double(*looks) << "\n";
  for (double v : values) out << format_double(v) << "\n";
  if (!out) fail(path, "write error");
}

SampleFile read_sample_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open for reading");
  SampleFile out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (auto looks = parse_looks_comment(line)) out.looks = looks;
      continue;
    }
    try {
      out.values.push_back(parse_double(line));
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "line " << lineno << ": " << e.what();
      fail(path, msg.str());
    }
  }
  return out;
}

std::vector<double> PgmImage::region(const RegionSelector& r) const {
  if (r.width == 0 || r.height == 0 || r.x + r.width > width ||
      r.y + r.height > height) {
    std::ostringstream msg;
    msg << "region " << r.width << "x" << r.height << "+" << r.x << "+" << r.y
        << " leaves the " << width << "x" << height << " image";
    throw std::invalid_argument(msg.str());
  }
  std::vector<double> out;
  out.reserve(r.width * r.height);
  for (std::size_t row = r.y; row < r.y + r.height; ++row) {
    for (std::size_t col = r.x; col < r.x + r.width; ++col) {
      out.push_back(intensities[row * width + col]);
    }
  }
  return out;
}

void write_pgm(const std::string& path, const std::vector<double>& intensities,
               std::size_t width, std::size_t height, std::optional<double> looks,
               bool binary, unsigned maxval) {
  if (intensities.size() != width * height || width == 0 || height == 0) {
    throw std::invalid_argument("write_pgm: dimensions do not match the data");
  }
  if (maxval == 0 || maxval > 65535) {
    throw std::invalid_argument("write_pgm: maxval must be in [1, 65535]");
  }
  const double top = *std::max_element(intensities.begin(), intensities.end());
  const double scale = top > 0 ? top / maxval : 1.0;
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out << (binary ? "P5" : "P2") << "\n";
  out << "# scale " << format_double(scale) << "\n";
  if (looks) out << "# looks " << format_double(*looks) << "\n";
  out << width << " " << height << "\n" << maxval << "\n";
  const bool two_bytes = maxval > 255;
  for (double v : intensities) {
    const double q = std::round(v / scale);
    const unsigned pixel = static_cast<unsigned>(std::min<double>(std::max(q, 0.0), maxval));
    if (binary) {
      if (two_bytes) {
        const unsigned char hi = static_cast<unsigned char>(pixel >> 8);
        const unsigned char lo = static_cast<unsigned char>(pixel & 0xFF);
        out.put(static_cast<char>(hi)).put(static_cast<char>(lo));
      } else {
        out.put(static_cast<char>(pixel));
      }
    } else {
      out << pixel << "\n";
    }
  }
  if (!out) fail(path, "write error");
}

PgmImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open for reading");
  PgmImage img;
  std::string magic;
  // Header tokens may be interleaved with comment lines.
  auto next_token = [&](std::string& tok) {
    for (;;) {
      if (!(in >> tok)) fail(path, "truncated PGM header");
      if (tok.front() == '#') {
        std::string rest;
        std::getline(in, rest);
        const std::string line = tok + rest;
        if (auto s = parse_scale_comment(line)) img.scale = *s;
        if (auto l = parse_looks_comment(line)) img.looks = l;
        continue;
      }
      return;
    }
  };
  next_token(magic);
  if (magic != "P2" && magic != "P5") fail(path, "not a P2/P5 PGM file");
  std::string tok;
  next_token(tok);
  img.width = static_cast<std::size_t>(std::stoul(tok));
  next_token(tok);
  img.height = static_cast<std::size_t>(std::stoul(tok));
  next_token(tok);
  const long maxval = std::stol(tok);
  if (maxval < 1 || maxval > 65535) fail(path, "maxval out of range");
  img.maxval = static_cast<unsigned>(maxval);
  const std::size_t count = img.width * img.height;
  img.intensities.reserve(count);
  if (magic == "P2") {
    for (std::size_t i = 0; i < count; ++i) {
      unsigned long v;
      if (!(in >> v)) fail(path, "truncated P2 payload");
      img.intensities.push_back(img.scale * static_cast<double>(v));
    }
  } else {
    in.get();  // single whitespace after maxval
    const bool two_bytes = img.maxval > 255;
    for (std::size_t i = 0; i < count; ++i) {
      int hi = in.get();
      if (hi == EOF) fail(path, "truncated P5 payload");
      unsigned pixel = static_cast<unsigned>(hi);
      if (two_bytes) {
        const int lo = in.get();
        if (lo == EOF) fail(path, "truncated P5 payload");
        pixel = (pixel << 8) | static_cast<unsigned>(lo);
      }
      img.intensities.push_back(img.scale * static_cast<double>(pixel));
    }
  }
  return img;
}

}  // namespace g0::io
