#pragma once

#include <vector>

#include "g0/divergence.hpp"
#include "g0/model.hpp"

namespace g0 {

// Right-continuous empirical distribution function of a sample.
class EcdfView {
 public:
  explicit EcdfView(const Sample& s);

  // #{ z_j <= z } / n, exactly.
  double operator()(double z) const;

  const std::vector<double>& sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

EcdfView ecdf(const Sample& s);

// Two-sample Kolmogorov-Smirnov test. The statistic sweep visits every
// observed value once with both pointers advanced through ties, which equals
// the brute-force maximum of |F_x - F_y| over the pooled points. The p-value
// is the asymptotic 1 - L(statistic).
TestResult ks_two_sample(const Sample& x, const Sample& y);

}  // namespace g0
