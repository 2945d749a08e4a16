#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "g0/rng.hpp"

namespace g0 {

// Parameters of the G0 intensity law: roughness alpha < 0, scale gamma > 0,
// equivalent number of looks L >= 1 (real valued; sensors report fractional
// looks such as 3.2).
struct G0Params {
  double alpha;
  double gamma;
  double looks;

  void validate() const;
};

// Fisher reparametrization: M = -alpha, gamma = M * mu.
struct FisherParams {
  double m;
  double mu_fisher;
  double looks;

  void validate() const;
};

// Log-cumulants w_i = E(Z^i log Z); w1 needs M > 1 and w2 needs M > 2.
struct LogCumulants {
  double w0;
  std::optional<double> w1;
  std::optional<double> w2;
};

// An ordered collection of positive, finite intensity observations.
class Sample {
 public:
  explicit Sample(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;
};

// Density evaluator with the parameter-only part of the log-density
// precomputed; use this in likelihood and quadrature loops.
class G0Density {
 public:
  explicit G0Density(const G0Params& p);

  // ln f(z), z > 0.
  double log_density(double z) const;
  // f(z), z >= 0.
  double density(double z) const;

  const G0Params& params() const { return params_; }

 private:
  G0Params params_;
  double log_norm_;
};

double density(const G0Params& p, double z);
double log_density(const G0Params& p, double z);

// F(z) = Gamma(L-a)/(Gamma(-a) Gamma(L+1)) (Lz/g)^L 2F1(L, L-a; L+1; -Lz/g),
// evaluated through the hypergeometric series on whichever wing of the
// distribution converges fast.
double cdf(const G0Params& p, double z);

// Inverse CDF by bracketing + bisection; |cdf(result) - q| <= 1e-9.
double quantile(const G0Params& p, double q);

// E(Z^r) for r > 0; +infinity when r >= -alpha.
double moment(const G0Params& p, double r);

// E(Z) = -gamma/(1+alpha) for alpha < -1, +infinity otherwise.
double mean(const G0Params& p);

LogCumulants log_cumulants(const G0Params& p);

FisherParams to_fisher(const G0Params& p);
G0Params from_fisher(const FisherParams& f);

// One draw Z = Y/W with Y ~ Gamma(L, rate L) and W ~ Gamma(-alpha, rate gamma).
double sample_one(const G0Params& p, Philox& gen);

// n independent draws; consumes gen sequentially, deterministic per stream.
Sample sample(const G0Params& p, std::size_t n, Philox& gen);

}  // namespace g0
