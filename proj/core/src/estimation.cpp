#include "g0/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "g0/error.hpp"
#include "g0/specfun.hpp"

namespace g0 {

namespace {

double sample_mean(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

bool all_equal(const std::vector<double>& v) {
  for (double x : v) {
    if (x != v.front()) return false;
  }
  return true;
}

void check_looks(double looks) {
  if (!(looks >= 1.0) || !std::isfinite(looks)) {
    throw std::invalid_argument("looks must be >= 1");
  }
}

// Mean log-likelihood and its (alpha, gamma) gradient in one pass.
struct LikelihoodEval {
  double mean_ll;
  std::array<double, 2> grad;
};

LikelihoodEval evaluate(const Sample& s, double alpha, double gamma, double looks) {
  const double n = static_cast<double>(s.size());
  const double a = -alpha;
  double sum_log = 0.0;
  double sum_inv = 0.0;
  for (double z : s.values()) {
    const double gz = gamma + looks * z;
    sum_log += std::log(gz);
    sum_inv += 1.0 / gz;
  }
  double sum_logz = 0.0;
  for (double z : s.values()) sum_logz += std::log(z);

  const double log_norm = looks * std::log(looks) + std::lgamma(looks + a) -
                          alpha * std::log(gamma) - std::lgamma(a) -
                          std::lgamma(looks);
  LikelihoodEval out;
  out.mean_ll = log_norm + (looks - 1.0) * sum_logz / n +
                (alpha - looks) * sum_log / n;
  out.grad[0] = specfun::digamma(a) - specfun::digamma(looks + a) -
                std::log(gamma) + sum_log / n;
  out.grad[1] = -alpha / gamma + (alpha - looks) * sum_inv / n;
  return out;
}

}  // namespace

void FitOptions::validate() const {
  if (max_iterations < 1 || !(gradient_tolerance > 0.0) ||
      !(alpha_floor < alpha_ceiling) || !(alpha_ceiling < 0.0)) {
    throw std::invalid_argument("FitOptions: need max_iterations >= 1, "
                                "gradient_tolerance > 0, alpha_floor < alpha_ceiling < 0");
  }
}

double log_likelihood(const G0Params& p, const Sample& s) {
  const G0Density d(p);
  double acc = 0.0;
  for (double z : s.values()) acc += d.log_density(z);
  return acc;
}

std::array<double, 2> score(const G0Params& p, const Sample& s) {
  p.validate();
  return evaluate(s, p.alpha, p.gamma, p.looks).grad;
}

G0Params init_moments(const Sample& s, double looks, const FitOptions& opts) {
  check_looks(looks);
  opts.validate();
  if (s.size() < 2) throw std::invalid_argument("init_moments: need at least 2 observations");
  const double m1 = sample_mean(s.values());
  double m2 = 0.0;
  for (double z : s.values()) m2 += z * z;
  m2 /= static_cast<double>(s.size());

  const G0Params fallback{-3.0, m1 * 2.0, looks};
  const double ratio = (m2 / (m1 * m1)) * looks / (looks + 1.0);
  if (ratio > 1.0) {
    const double m = (2.0 * ratio - 1.0) / (ratio - 1.0);
    const double alpha = -m;
    if (alpha > opts.alpha_floor && alpha <= -2.05) {
      return G0Params{alpha, m1 * (m - 1.0), looks};
    }
  }
  return fallback;
}

FitResult fit_ml(const Sample& s, double looks, const FitOptions& opts) {
  check_looks(looks);
  opts.validate();
  FitResult result;
  if (s.size() < 2) {
    result.note = "sample too small";
    return result;
  }
  if (all_equal(s.values())) {
    result.note = "degenerate sample (all observations equal)";
    return result;
  }

  const double n = static_cast<double>(s.size());
  G0Params start = opts.init.value_or(init_moments(s, looks, opts));
  start.looks = looks;
  start.alpha = std::clamp(start.alpha, opts.alpha_floor + 1e-6,
                           opts.alpha_ceiling - 1e-6);

  const double u_max = std::log(opts.alpha_ceiling - opts.alpha_floor);
  auto to_params = [&](double u, double v) {
    return G0Params{opts.alpha_ceiling - std::exp(u), std::exp(v), looks};
  };

  double u = std::log(opts.alpha_ceiling - start.alpha);
  double v = std::log(start.gamma);

  // Objective: negative mean log-likelihood in (u, v).
  auto eval_uv = [&](double uu, double vv, double& fval, std::array<double, 2>& guv,
                     std::array<double, 2>& score_out) {
    const G0Params p = to_params(uu, vv);
    const LikelihoodEval e = evaluate(s, p.alpha, p.gamma, looks);
    fval = -e.mean_ll;
    score_out = e.grad;
    guv[0] = e.grad[0] * std::exp(uu);  // -d(-ll)/du = -grad_a * (-e^u)
    guv[1] = -e.grad[1] * p.gamma;
    return std::isfinite(fval);
  };

  double f;
  std::array<double, 2> g{}, sc{};
  if (!eval_uv(u, v, f, g, sc)) {
    result.note = "non-finite likelihood at start";
    return result;
  }

  // Inverse Hessian approximation.
  double h00 = 1.0, h01 = 0.0, h11 = 1.0;
  int iter = 0;
  bool converged = false;
  for (; iter < opts.max_iterations; ++iter) {
    if (std::max(std::abs(sc[0]), std::abs(sc[1])) <= opts.gradient_tolerance) {
      converged = true;
      break;
    }
    double du = -(h00 * g[0] + h01 * g[1]);
    double dv = -(h01 * g[0] + h11 * g[1]);
    double descent = du * g[0] + dv * g[1];
    if (!(descent < 0.0)) {  // reset to steepest descent
      h00 = h11 = 1.0;
      h01 = 0.0;
      du = -g[0];
      dv = -g[1];
      descent = du * g[0] + dv * g[1];
    }
    // Backtracking Armijo line search with box clamp on u.
    double step = 1.0;
    double fn = f;
    std::array<double, 2> gn{}, scn{};
    double un = u, vn = v;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      un = std::clamp(u + step * du, -700.0, u_max - 1e-9);
      vn = std::clamp(v + step * dv, -700.0, 700.0);
      if (eval_uv(un, vn, fn, gn, scn) && fn <= f + 1e-4 * step * descent) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no further progress
    const double su = un - u, sv = vn - v;
    const double yu = gn[0] - g[0], yv = gn[1] - g[1];
    const double sy = su * yu + sv * yv;
    if (sy > 1e-12 * std::sqrt((su * su + sv * sv) * (yu * yu + yv * yv))) {
      // BFGS update of the inverse Hessian (2x2, written out).
      const double rho = 1.0 / sy;
      const double hy0 = h00 * yu + h01 * yv;
      const double hy1 = h01 * yu + h11 * yv;
      const double yhy = yu * hy0 + yv * hy1;
      const double c = (1.0 + rho * yhy) * rho;
      h00 += c * su * su - rho * (su * hy0 + hy0 * su);
      h01 += c * su * sv - rho * (su * hy1 + hy0 * sv);
      h11 += c * sv * sv - rho * (sv * hy1 + hy1 * sv);
    }
    u = un;
    v = vn;
    f = fn;
    g = gn;
    sc = scn;
  }
  if (!converged) {
    converged = std::max(std::abs(sc[0]), std::abs(sc[1])) <= opts.gradient_tolerance;
  }

  result.params = to_params(u, v);
  result.converged = converged;
  result.iterations = iter;
  result.log_likelihood = -f * n;
  result.score_norm = std::max(std::abs(sc[0]), std::abs(sc[1]));
  if (!converged && result.note.empty()) {
    std::ostringstream msg;
    msg << "no convergence after " << iter << " iterations (score norm "
        << result.score_norm << ")";
    result.note = msg.str();
  }
  return result;
}

GammaFit fit_gamma_ml(const Sample& s) {
  if (s.size() < 2) throw std::invalid_argument("fit_gamma_ml: need at least 2 observations");
  if (all_equal(s.values())) {
    throw std::invalid_argument("fit_gamma_ml: degenerate sample (all observations equal)");
  }
  const double m = sample_mean(s.values());
  double mean_log = 0.0;
  for (double z : s.values()) mean_log += std::log(z);
  mean_log /= static_cast<double>(s.size());
  const double sdiff = std::log(m) - mean_log;  // > 0 by Jensen
  if (!(sdiff > 0.0)) {
    throw std::invalid_argument("fit_gamma_ml: log-moment gap is not positive");
  }
  double k = (3.0 - sdiff + std::sqrt((sdiff - 3.0) * (sdiff - 3.0) + 24.0 * sdiff)) /
             (12.0 * sdiff);
  for (int i = 0; i < 100; ++i) {
    const double fk = std::log(k) - specfun::digamma(k) - sdiff;
    const double dfk = 1.0 / k - specfun::trigamma(k);
    const double next = k - fk / dfk;
    if (!(next > 0.0)) {
      k *= 0.5;
      continue;
    }
    if (std::abs(next - k) <= 1e-12 * k) {
      k = next;
      break;
    }
    k = next;
  }
  return GammaFit{k, m};
}

double gamma_log_density(const GammaFit& fit, double z) {
  if (!(z > 0.0)) throw std::domain_error("gamma_log_density: z must be positive");
  const double rate = fit.shape / fit.mean;
  return fit.shape * std::log(rate) - std::lgamma(fit.shape) +
         (fit.shape - 1.0) * std::log(z) - rate * z;
}

double sse_fit(const Sample& s, const std::function<double(double)>& density_eval,
               int bins) {
  if (bins < 2) throw std::invalid_argument("sse_fit: bins must be >= 2");
  const double zmax = *std::max_element(s.values().begin(), s.values().end());
  const double width = zmax / bins;
  if (!(width > 0.0)) throw std::invalid_argument("sse_fit: zero-width histogram");
  const double n = static_cast<double>(s.size());
  std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
  for (double z : s.values()) {
    auto idx = static_cast<std::size_t>(z / width);
    if (idx >= counts.size()) idx = counts.size() - 1;  // z == zmax
    counts[idx] += 1.0;
  }
  double sse = 0.0;
  for (int i = 0; i < bins; ++i) {
    const double hist_density = counts[static_cast<std::size_t>(i)] / (n * width);
    const double mid = (i + 0.5) * width;
    const double diff = density_eval(mid) - hist_density;
    sse += diff * diff;
  }
  return sse / n;
}

}  // namespace g0
