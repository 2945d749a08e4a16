#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "g0/model.hpp"

namespace g0 {

struct FitOptions {
  int max_iterations = 500;
  double gradient_tolerance = 1e-8;  // max-norm of the score at the optimum
  std::optional<G0Params> init;      // moment-based start when absent
  double alpha_floor = -50.0;
  double alpha_ceiling = -0.01;

  void validate() const;
};

struct FitResult {
  G0Params params{-1.0, 1.0, 1.0};
  bool converged = false;
  int iterations = 0;
  double log_likelihood = 0.0;
  double score_norm = 0.0;
  std::string note;
};

struct GammaFit {
  double shape;
  double mean;
};

// Sum of log-densities over the sample.
double log_likelihood(const G0Params& p, const Sample& s);

// Gradient of the mean log-likelihood in (alpha, gamma):
//   d/dalpha: psi(-a) - psi(L-a) - ln g + (1/n) sum ln(g + L z_i)
//   d/dgamma: -a/g + ((a-L)/n) sum (g + L z_i)^-1
std::array<double, 2> score(const G0Params& p, const Sample& s);

// Maximum likelihood fit of (alpha, gamma) with L known. BFGS on the
// unconstrained variables alpha = ceiling - exp(u), gamma = exp(v);
// convergence means score max-norm <= gradient_tolerance. Never throws on
// statistical failure: non-convergence comes back flagged so a Monte Carlo
// harness can count and redraw.
FitResult fit_ml(const Sample& s, double looks, const FitOptions& opts = FitOptions{});

// Start values from the first two moments; falls back to (-3, 2 m1) when the
// implied alpha leaves (alpha_floor, -2.05].
G0Params init_moments(const Sample& s, double looks,
                      const FitOptions& opts = FitOptions{});

// ML fit of the scaled gamma law (free shape and mean) by Newton iteration on
// ln k - psi(k) = ln(mean) - mean(ln z).
GammaFit fit_gamma_ml(const Sample& s);

double gamma_log_density(const GammaFit& fit, double z);

// Sum of squared errors between the density-normalized histogram (equal-width
// bins over [0, max(sample)]) and a fitted density at bin midpoints, divided
// by the sample size.
double sse_fit(const Sample& s, const std::function<double(double)>& density_eval,
               int bins);

}  // namespace g0
