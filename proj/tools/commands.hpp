#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "g0/io.hpp"

namespace g0kit {

// Exit codes: 0 success (statistical non-convergence is data, not failure),
// 2 usage/input error, 3 internal numerical failure.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct SampleArgs {
  double alpha = 0.0;
  std::optional<double> gamma;
  std::optional<double> mean;
  double looks = 1.0;
  std::optional<std::size_t> n;
  std::optional<std::size_t> width;
  std::optional<std::size_t> height;
  double epsilon = 0.0;
  double scale_factor = 100.0;
  std::uint64_t seed = 1;
  std::string out_path;
};

struct FitArgs {
  std::string in_path;
  std::optional<double> looks;
  std::string format = "json";
  std::optional<g0::io::RegionSelector> region;
  int bins = 32;
};

struct ContrastArgs {
  std::string a_path;
  std::string b_path;
  std::optional<double> looks;
  std::vector<std::string> tests = {"kl", "t", "b", "ag", "ks"};
  double level = 0.01;
};

struct McArgs {
  std::string mode;  // size | power | estimator | grid
  std::string config_path;
  std::string grid_kind = "size";  // for mode == grid
  std::uint64_t seed = 1;
  std::string out_path;
  unsigned workers = 0;
  std::optional<std::size_t> replications;  // override for config scenarios
};

struct GofArgs {
  std::string in_path;
  std::optional<double> looks;
  int bins = 32;
  std::optional<g0::io::RegionSelector> region;
  std::string hist_out;
};

int cmd_sample(const SampleArgs& args);
int cmd_fit(const FitArgs& args);
int cmd_contrast(const ContrastArgs& args);
int cmd_mc(const McArgs& args);
int cmd_gof(const GofArgs& args);

}  // namespace g0kit
