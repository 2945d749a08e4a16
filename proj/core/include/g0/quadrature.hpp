#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace g0::quad {

struct Options {
  double local_abs_tol = 1e-10;  // per-interval acceptance threshold
  int max_intervals = 20000;
  double min_width = 1e-13;  // accept below this width regardless of error
};

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
  int intervals = 0;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair (QUADPACK constants).
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084728183332500005010226};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
void gauss_kronrod(const F& f, double a, double b, double& value, double& error) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double gauss = kWg[3] * fc;
  double kronrod = kWgk[7] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const double fsum = f(center - dx) + f(center + dx);
    kronrod += kWgk[i] * fsum;
    if (i % 2 == 1) gauss += kWg[i / 2] * fsum;
  }
  value = kronrod * half;
  const double diff = std::abs(kronrod - gauss) * half;
  // QUADPACK-style sharpened estimate.
  error = diff * std::min(1.0, std::pow(200.0 * diff / std::max(std::abs(value), 1e-300), 1.5));
  if (!std::isfinite(error) || error < diff * 1e-6) error = diff;
}

}  // namespace detail

// Adaptive Gauss-Kronrod on [a,b]; splits the worst interval until every
// local error is below local_abs_tol or the interval budget runs out.
template <class F>
Result integrate(const F& f, double a, double b, const Options& opts = Options{}) {
  struct Interval {
    double a, b, value, error;
  };
  Result res;
  Interval first{};
  first.a = a;
  first.b = b;
  detail::gauss_kronrod(f, a, b, first.value, first.error);
  std::vector<Interval> work{first};
  res.intervals = 1;
  std::vector<Interval> done;
  while (!work.empty()) {
    Interval cur = work.back();
    work.pop_back();
    if (cur.error <= opts.local_abs_tol || (cur.b - cur.a) <= opts.min_width) {
      done.push_back(cur);
      continue;
    }
    if (res.intervals >= opts.max_intervals) {
      res.converged = false;
      done.push_back(cur);
      continue;
    }
    const double mid = 0.5 * (cur.a + cur.b);
    Interval left{}, right{};
    left.a = cur.a;
    left.b = mid;
    right.a = mid;
    right.b = cur.b;
    detail::gauss_kronrod(f, left.a, left.b, left.value, left.error);
    detail::gauss_kronrod(f, right.a, right.b, right.value, right.error);
    res.intervals += 2;
    work.push_back(left);
    work.push_back(right);
  }
  for (const Interval& iv : done) {
    res.value += iv.value;
    res.error_estimate += iv.error;
  }
  return res;
}

// Integral over (0, inf) through z = t/(1-t); the integrand is evaluated at
// interior nodes only, so endpoint singularities are never touched.
template <class F>
Result integrate_positive_halfline(const F& f, const Options& opts = Options{}) {
  auto g = [&f](double t) {
    const double omt = 1.0 - t;
    const double z = t / omt;
    return f(z) / (omt * omt);
  };
  return integrate(g, 0.0, 1.0, opts);
}

}  // namespace g0::quad
