#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace g0::io {

// Shortest decimal string that parses back to the same double ('.' decimal
// point; "inf"/"nan" for non-finite values). All file output goes through
// this so emitted numbers round-trip byte-identically.
std::string format_double(double value);

double parse_double(const std::string& text);

struct SampleFile {
  std::vector<double> values;
  std::optional<double> looks;  // from a "# looks <L>" header comment
};

// One observation per line, '\n' terminators, optional "# looks" header.
void write_sample_csv(const std::string& path, const std::vector<double>& values,
                      std::optional<double> looks = std::nullopt);
SampleFile read_sample_csv(const std::string& path);

struct RegionSelector {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t width = 0;
  std::size_t height = 0;
};

// PGM matrix (P2 ascii or P5 binary, 8- or 16-bit). Pixel values map to
// intensities through the declared linear scale in the header comment
// "# scale <s>": intensity = s * pixel.
struct PgmImage {
  std::size_t width = 0;
  std::size_t height = 0;
  unsigned maxval = 65535;
  double scale = 1.0;
  std::optional<double> looks;
  std::vector<double> intensities;  // row-major, already scaled

  // Region extraction; throws when the region leaves the image bounds.
  std::vector<double> region(const RegionSelector& r) const;
};

void write_pgm(const std::string& path, const std::vector<double>& intensities,
               std::size_t width, std::size_t height,
               std::optional<double> looks = std::nullopt, bool binary = true,
               unsigned maxval = 65535);
PgmImage read_pgm(const std::string& path);

}  // namespace g0::io
