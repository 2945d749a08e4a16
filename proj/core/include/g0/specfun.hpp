#pragma once

#include <cstdint>

namespace g0::specfun {

// Accuracy targets for series summation. At least one of abs_tol / rel_tol
// must be positive and max_terms >= 1.
struct Tolerance {
  double abs_tol = 1e-15;
  double rel_tol = 1e-15;
  int max_terms = 10000;
};

// ln Gamma(x), x > 0.
double log_gamma(double x);

// psi(x) = d/dx ln Gamma(x), x > 0.
double digamma(double x);

// psi'(x), x > 0. Needed by the gamma-law shape iteration.
double trigamma(double x);

// Gauss hypergeometric 2F1(a,b;c;x) for c > 0 and x < 1. Negative arguments
// are mapped into [0,1) with the Pfaff transformation before the power
// series is summed; the series is summed until the running term drops below
// tol and throws NumericalError when max_terms is exhausted.
double gauss_2f1(double a, double b, double c, double x,
                 const Tolerance& tol = Tolerance{});

// Kolmogorov's asymptotic law L(s) = 1 - 2 sum_k (-1)^{k-1} exp(-2 k^2 s^2),
// s >= 0. L(0) = 0 by convention.
double kolmogorov_cdf(double s);

// Pr(chi^2_dof > s) for integer dof >= 1 and s >= 0. For dof = 2 this is
// exp(-s/2) up to rounding.
double chi_square_sf(double s, int dof);

}  // namespace g0::specfun
