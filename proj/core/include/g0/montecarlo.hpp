#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "g0/divergence.hpp"
#include "g0/estimation.hpp"
#include "g0/model.hpp"

namespace g0::mc {

// Innovative-outlier mixture: with probability epsilon an observation comes
// from the same law with scale_factor * gamma.
struct ContaminationSpec {
  double epsilon = 0.0;
  double scale_factor = 100.0;

  void validate() const;
};

enum class ScenarioClass { i, ii, iii, iv, v };

std::string to_string(ScenarioClass c);

// One Monte Carlo cell: two G0 laws sharing L, equal sample sizes N = m = n.
struct ScenarioSpec {
  double alpha1;
  double alpha2;
  double gamma1;
  double gamma2;
  double looks;
  std::size_t sample_size;
  ContaminationSpec contamination;
  std::size_t replications = 1000;
  std::vector<double> nominal_levels = {0.01};
  ScenarioClass scenario_class = ScenarioClass::i;

  G0Params first() const { return G0Params{alpha1, gamma1, looks}; }
  G0Params second() const { return G0Params{alpha2, gamma2, looks}; }
  void validate() const;
};

// Class from the (alpha, mu) relations, mu = -gamma/(1+alpha) (infinite when
// alpha >= -1).
ScenarioClass classify_scenario(const G0Params& p, const G0Params& q);

struct ParamStats {
  double bias = 0.0;
  double cv_percent = 0.0;
  double mse = 0.0;
};

struct MCReport {
  ScenarioSpec spec;
  std::uint64_t master_seed = 0;
  // Size/power studies:
  std::vector<DistanceKind> tests;
  std::vector<std::vector<double>> rejection_rates;  // [test][level]
  double dbar = 0.0;
  // Estimator studies:
  std::optional<ParamStats> alpha_stats;
  std::optional<ParamStats> gamma_stats;
  // Bookkeeping (valid instances are redrawn until the target is met):
  std::size_t valid_replications = 0;
  std::size_t censored = 0;
  std::size_t nonconvergent = 0;
};

// Draws n observations from the epsilon-mixture. With epsilon = 0 the stream
// consumption is identical to model::sample.
Sample contaminated_sample(const G0Params& p, const ContaminationSpec& c,
                           std::size_t n, Philox& gen);

// Rejection rates under equal parameters (scenario class i). Per replication
// two samples are drawn, both fitted by ML, and every requested test applied
// at every nominal level. Replications with non-convergent fits are redrawn
// and counted. Reports are identical for any worker count.
MCReport empirical_size(const ScenarioSpec& spec,
                        const std::vector<DistanceKind>& tests,
                        std::uint64_t master_seed, unsigned workers = 0);

// Rejection rates under distinct laws (classes ii-v); also reports the mean
// discrepancy of the true parameter pair.
MCReport empirical_power(const ScenarioSpec& spec,
                         const std::vector<DistanceKind>& tests,
                         std::uint64_t master_seed, unsigned workers = 0);

// Bias, CV% and MSE of the ML estimators under contamination, with the
// validity censoring alpha_hat in [10 alpha, alpha/20].
MCReport estimator_study(const G0Params& p, const ContaminationSpec& c,
                         std::size_t sample_size, std::size_t replications,
                         std::uint64_t master_seed, unsigned workers = 0);

enum class GridKind { size, power, estimator };

// The paper-style experiment grid: alpha in {-1.5,-3,-5}, mu in {1,2,5}
// (gamma = -mu (1+alpha)), L in {1,8}, N in {49,81,121}; epsilon in
// {0, 1e-4, 5e-3} for the size and estimator studies. Lexicographic order:
// epsilon, N, L, alpha, mu.
std::vector<ScenarioSpec> scenario_grid(GridKind kind);

}  // namespace g0::mc
