#include "g0/kstest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "g0/specfun.hpp"

namespace g0 {

EcdfView::EcdfView(const Sample& s) : sorted_(s.values()) {
  std::sort(sorted_.begin(), sorted_.end());
}

double EcdfView::operator()(double z) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), z);
  return static_cast<double>(it - sorted_.begin()) /
         static_cast<double>(sorted_.size());
}

EcdfView ecdf(const Sample& s) { return EcdfView(s); }

TestResult ks_two_sample(const Sample& x, const Sample& y) {
  std::vector<double> xs = x.values();
  std::vector<double> ys = y.values();
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const std::size_t m = xs.size();
  const std::size_t n = ys.size();

  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < m || j < n) {
    const double xv = i < m ? xs[i] : std::numeric_limits<double>::infinity();
    const double yv = j < n ? ys[j] : std::numeric_limits<double>::infinity();
    const double v = std::min(xv, yv);
    while (i < m && xs[i] == v) ++i;
    while (j < n && ys[j] == v) ++j;
    const double gap = std::abs(static_cast<double>(i) / m -
                                static_cast<double>(j) / n);
    d = std::max(d, gap);
  }

  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  const double statistic = std::sqrt(md * nd / (md + nd)) * d;
  const double p_value = 1.0 - specfun::kolmogorov_cdf(statistic);
  return TestResult{DistanceKind::KolmogorovSmirnov, d, statistic, p_value,
                    ReferenceLaw::Kolmogorov, 0, m, n};
}

}  // namespace g0
