#include "g0/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "g0/error.hpp"
#include "g0/quadrature.hpp"
#include "g0/specfun.hpp"

namespace g0 {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321214582;

void require_same_looks(const G0Params& p, const G0Params& q) {
  p.validate();
  q.validate();
  if (p.looks != q.looks) {
    std::ostringstream msg;
    msg << "contrast measures compare regions of one image: looks differ ("
        << p.looks << " vs " << q.looks << ")";
    throw std::invalid_argument(msg.str());
  }
}

double logaddexp(double a, double b) {
  const double m = std::max(a, b);
  if (!std::isfinite(m)) return m;
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

// phi(f_p/f_q) * f_q at one point, written in the stable (f_p, f_q, logs)
// form for each kind; indeterminate forms evaluate to zero.
double phi_term(DistanceKind kind, double lp, double lq) {
  const double fp = std::exp(lp);
  const double fq = std::exp(lq);
  switch (kind) {
    case DistanceKind::KullbackLeibler:
      if (fp == 0.0 && fq == 0.0) return 0.0;
      return (fp - fq) * (lp - lq);
    case DistanceKind::Triangular: {
      const double denom = fp + fq;
      if (denom == 0.0) return 0.0;
      const double diff = fp - fq;
      return diff * diff / denom;
    }
    case DistanceKind::Bhattacharyya:
      return 0.5 * (fp + fq) - std::exp(0.5 * (lp + lq));
    case DistanceKind::ArithmeticGeometric: {
      if (fp == 0.0 || fq == 0.0) return 0.0;
      const double m = 0.5 * (fp + fq);
      return m * (logaddexp(lp, lq) - kLn2 - lp) + 0.5 * (fp - fq);
    }
    default:
      throw std::invalid_argument("phi_term: not a parametric distance");
  }
}

double apply_h(DistanceKind kind, double y) {
  switch (kind) {
    case DistanceKind::KullbackLeibler:
      return 0.5 * y;
    case DistanceKind::Triangular:
    case DistanceKind::ArithmeticGeometric:
      return y;
    case DistanceKind::Bhattacharyya:
      if (y >= 1.0) {
        std::ostringstream msg;
        msg << "Bhattacharyya: inner integral " << y << " leaves the domain of -log(1-y)";
        throw NumericalError(msg.str());
      }
      return -std::log1p(-y);
    default:
      throw std::invalid_argument("apply_h: not a parametric distance");
  }
}

}  // namespace

bool is_parametric(DistanceKind kind) {
  return kind != DistanceKind::KolmogorovSmirnov;
}

double v_constant(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::KullbackLeibler:
    case DistanceKind::Triangular:
      return 1.0;
    case DistanceKind::Bhattacharyya:
    case DistanceKind::ArithmeticGeometric:
      return 4.0;
    default:
      throw std::invalid_argument("v_constant: defined for parametric distances only");
  }
}

std::string to_string(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::KullbackLeibler: return "kl";
    case DistanceKind::Triangular: return "t";
    case DistanceKind::Bhattacharyya: return "b";
    case DistanceKind::ArithmeticGeometric: return "ag";
    case DistanceKind::KolmogorovSmirnov: return "ks";
  }
  throw std::invalid_argument("to_string: unknown DistanceKind");
}

DistanceKind distance_kind_from_string(const std::string& name) {
  if (name == "kl") return DistanceKind::KullbackLeibler;
  if (name == "t") return DistanceKind::Triangular;
  if (name == "b") return DistanceKind::Bhattacharyya;
  if (name == "ag") return DistanceKind::ArithmeticGeometric;
  if (name == "ks") return DistanceKind::KolmogorovSmirnov;
  throw std::invalid_argument("unknown distance kind '" + name +
                              "' (expected kl, t, b, ag or ks)");
}

double hphi_divergence(DistanceKind kind, const G0Params& p, const G0Params& q) {
  require_same_looks(p, q);
  if (!is_parametric(kind)) {
    throw std::invalid_argument("hphi_divergence: KS is not an (h,phi)-divergence");
  }
  const G0Density dp(p);
  const G0Density dq(q);
  auto integrand = [&](double z) {
    return phi_term(kind, dp.log_density(z), dq.log_density(z));
  };
  const quad::Result r = quad::integrate_positive_halfline(integrand);
  if (!r.converged) {
    std::ostringstream msg;
    msg << "hphi_divergence(" << to_string(kind) << "): quadrature did not reach "
        << "the local tolerance after " << r.intervals
        << " intervals (error estimate " << r.error_estimate << ")";
    throw NumericalError(msg.str());
  }
  return apply_h(kind, r.value);
}

double hphi_distance(DistanceKind kind, const G0Params& p, const G0Params& q) {
  return 0.5 * (hphi_divergence(kind, p, q) + hphi_divergence(kind, q, p));
}

double analytic_ks_distance(const G0Params& p, const G0Params& q) {
  require_same_looks(p, q);
  constexpr int kGridPoints = 2048;
  const double lo = std::min(quantile(p, 1e-6), quantile(q, 1e-6));
  const double hi = std::max(quantile(p, 1.0 - 1e-6), quantile(q, 1.0 - 1e-6));
  auto gap = [&](double z) { return std::abs(cdf(p, z) - cdf(q, z)); };
  const double log_lo = std::log(lo);
  const double step = (std::log(hi) - log_lo) / (kGridPoints - 1);
  double best_z = lo;
  double best = gap(lo);
  for (int i = 1; i < kGridPoints; ++i) {
    const double z = std::exp(log_lo + i * step);
    const double g = gap(z);
    if (g > best) {
      best = g;
      best_z = z;
    }
  }
  // Golden-section refinement around the best grid cell.
  const double golden = 0.61803398874989484820458683436564;
  double a = best_z * std::exp(-step);
  double b = best_z * std::exp(step);
  double x1 = b - golden * (b - a);
  double x2 = a + golden * (b - a);
  double f1 = gap(x1);
  double f2 = gap(x2);
  for (int i = 0; i < 80 && (b - a) > 1e-14 * b; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + golden * (b - a);
      f2 = gap(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - golden * (b - a);
      f1 = gap(x1);
    }
  }
  best = std::max(best, std::max(f1, f2));
  return std::min(1.0, best);
}

TestResult test_statistic(DistanceKind kind, const G0Params& p_hat,
                          const G0Params& q_hat, std::size_t m, std::size_t n) {
  if (!is_parametric(kind)) {
    throw std::invalid_argument("test_statistic: use ks_two_sample for the KS test");
  }
  if (m < 1 || n < 1) {
    throw std::invalid_argument("test_statistic: sample sizes must be >= 1");
  }
  const double d = hphi_distance(kind, p_hat, q_hat);
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  const double statistic = 2.0 * md * nd * v_constant(kind) / (md + nd) * d;
  // M = 2 estimated parameters (alpha, gamma); looks is known.
  const double p_value = specfun::chi_square_sf(statistic, 2);
  return TestResult{kind, d, statistic, p_value, ReferenceLaw::ChiSquare, 2, m, n};
}

double mean_discrepancy(const G0Params& p_hat, const G0Params& q_hat) {
  const double sum = hphi_distance(DistanceKind::KullbackLeibler, p_hat, q_hat) +
                     hphi_distance(DistanceKind::Triangular, p_hat, q_hat) +
                     hphi_distance(DistanceKind::Bhattacharyya, p_hat, q_hat) +
                     hphi_distance(DistanceKind::ArithmeticGeometric, p_hat, q_hat) +
                     analytic_ks_distance(p_hat, q_hat);
  return sum / 5.0;
}

}  // namespace g0
