#include "g0/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "g0/error.hpp"
#include "g0/specfun.hpp"

namespace g0 {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ln(gamma + L z) without overflow for z up to ~1e300.
double log_gamma_plus_lz(double gamma, double looks, double z) {
  const double lz = looks * z;
  if (lz > gamma) return std::log(lz) + std::log1p(gamma / lz);
  return std::log(gamma) + std::log1p(lz / gamma);
}

}  // namespace

void G0Params::validate() const {
  if (!(alpha < 0.0) || !std::isfinite(alpha) || !(gamma > 0.0) ||
      !std::isfinite(gamma) || !(looks >= 1.0) || !std::isfinite(looks)) {
    std::ostringstream msg;
    msg << "G0Params: need alpha < 0, gamma > 0, looks >= 1; got (alpha="
        << alpha << ", gamma=" << gamma << ", looks=" << looks << ")";
    throw std::invalid_argument(msg.str());
  }
}

void FisherParams::validate() const {
  if (!(m > 0.0) || !std::isfinite(m) || !(mu_fisher > 0.0) ||
      !std::isfinite(mu_fisher) || !(looks >= 1.0) || !std::isfinite(looks)) {
    throw std::invalid_argument("FisherParams: need m > 0, mu_fisher > 0, looks >= 1");
  }
}

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw std::invalid_argument("Sample: must hold at least one observation");
  }
  for (double v : values_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream msg;
      msg << "Sample: observations must be positive and finite, got " << v;
      throw std::invalid_argument(msg.str());
    }
  }
}

G0Density::G0Density(const G0Params& p) : params_(p) {
  p.validate();
  log_norm_ = p.looks * std::log(p.looks) + std::lgamma(p.looks - p.alpha) -
              p.alpha * std::log(p.gamma) - std::lgamma(-p.alpha) -
              std::lgamma(p.looks);
}

double G0Density::log_density(double z) const {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw std::domain_error("log_density: z must be positive and finite");
  }
  return log_norm_ + (params_.looks - 1.0) * std::log(z) +
         (params_.alpha - params_.looks) *
             log_gamma_plus_lz(params_.gamma, params_.looks, z);
}

double G0Density::density(double z) const {
  if (!(z >= 0.0) || !std::isfinite(z)) {
    throw std::domain_error("density: z must be nonnegative and finite");
  }
  if (z == 0.0) {
    if (params_.looks == 1.0) return -params_.alpha / params_.gamma;
    return 0.0;
  }
  return std::exp(log_density(z));
}

double density(const G0Params& p, double z) { return G0Density(p).density(z); }

double log_density(const G0Params& p, double z) {
  return G0Density(p).log_density(z);
}

double cdf(const G0Params& p, double z) {
  p.validate();
  if (!(z >= 0.0)) {
    throw std::domain_error("cdf: z must be nonnegative");
  }
  if (z == 0.0) return 0.0;
  if (!std::isfinite(z)) return 1.0;
  const double a = -p.alpha;     // > 0
  const double L = p.looks;
  const double t = L * z;
  const double x = t / (p.gamma + t);
  double value;
  // The lower-wing series alternates through ~|alpha| growing terms, so hand
  // the mid range and the upper wing to the complementary series, which has
  // at most ~L sign changes.
  if (x <= 0.3) {
    // F = C x^L 2F1(L, 1+alpha; L+1; x), the Pfaff-transformed image of the
    // formula with argument -Lz/gamma.
    const double logc =
        std::lgamma(L + a) - std::lgamma(a) - std::lgamma(L + 1.0);
    value = std::exp(logc + L * std::log(x)) *
            specfun::gauss_2f1(L, 1.0 - a, L + 1.0, x);
  } else {
    // Upper wing through the complementary incomplete-beta series.
    const double y = p.gamma / (p.gamma + t);
    const double logc =
        std::lgamma(L + a) - std::lgamma(a + 1.0) - std::lgamma(L);
    value = 1.0 - std::exp(logc + a * std::log(y)) *
                      specfun::gauss_2f1(a, 1.0 - L, 1.0 + a, y);
  }
  return std::min(1.0, std::max(0.0, value));
}

double quantile(const G0Params& p, double q) {
  p.validate();
  if (!(q > 0.0) || !(q < 1.0)) {
    throw std::domain_error("quantile: q must lie in (0,1)");
  }
  double lo = p.gamma / p.looks;
  double hi = lo;
  int guard = 0;
  while (cdf(p, lo) > q) {
    lo *= 0.25;
    if (++guard > 600) throw NumericalError("quantile: bracketing failed (low)");
  }
  guard = 0;
  while (cdf(p, hi) < q) {
    hi *= 4.0;
    if (++guard > 600) throw NumericalError("quantile: bracketing failed (high)");
  }
  // Geometric bisection; the bracket spans orders of magnitude.
  for (int i = 0; i < 400; ++i) {
    const double mid = std::sqrt(lo * hi);
    const double f = cdf(p, mid);
    if (std::abs(f - q) <= 1e-12) return mid;
    (f < q ? lo : hi) = mid;
    if (hi - lo <= 1e-15 * hi) break;
  }
  return std::sqrt(lo * hi);
}

double moment(const G0Params& p, double r) {
  p.validate();
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::domain_error("moment: order must be positive and finite");
  }
  if (!(-r > p.alpha)) return kInf;
  if (r == 1.0) return mean(p);
  const double a = -p.alpha;
  return std::exp(r * (std::log(p.gamma) - std::log(p.looks)) +
                  std::lgamma(a - r) + std::lgamma(p.looks + r) -
                  std::lgamma(a) - std::lgamma(p.looks));
}

double mean(const G0Params& p) {
  p.validate();
  if (!(p.alpha < -1.0)) return kInf;
  return -p.gamma / (1.0 + p.alpha);
}

LogCumulants log_cumulants(const G0Params& p) {
  p.validate();
  const double m = -p.alpha;
  const double log_scale = std::log(p.gamma) - std::log(p.looks);
  LogCumulants out;
  out.w0 = log_scale + specfun::digamma(p.looks) - specfun::digamma(m);
  if (m > 1.0) {
    out.w1 = moment(p, 1.0) *
             (log_scale + specfun::digamma(p.looks + 1.0) - specfun::digamma(m - 1.0));
  }
  if (m > 2.0) {
    out.w2 = moment(p, 2.0) *
             (log_scale + specfun::digamma(p.looks + 2.0) - specfun::digamma(m - 2.0));
  }
  return out;
}

FisherParams to_fisher(const G0Params& p) {
  p.validate();
  return FisherParams{-p.alpha, p.gamma / -p.alpha, p.looks};
}

G0Params from_fisher(const FisherParams& f) {
  f.validate();
  return G0Params{-f.m, f.m * f.mu_fisher, f.looks};
}

double sample_one(const G0Params& p, Philox& gen) {
  for (;;) {
    const double y = rng::gamma_variate(gen, p.looks);    // speckle
    const double w = rng::gamma_variate(gen, -p.alpha);   // 1/backscatter
    if (y > 0.0 && w > 0.0) {
      const double z = (p.gamma * y) / (p.looks * w);
      if (z > 0.0 && std::isfinite(z)) return z;
    }
    // Underflowed variate (possible for shapes near zero); redraw.
  }
}

Sample sample(const G0Params& p, std::size_t n, Philox& gen) {
  p.validate();
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  std::vector<double> values;
  values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) values.push_back(sample_one(p, gen));
  return Sample(std::move(values));
}

}  // namespace g0
