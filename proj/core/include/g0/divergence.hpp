#pragma once

#include <cstddef>
#include <string>

#include "g0/model.hpp"

namespace g0 {

// The five contrast measures. The first four are (h,phi)-divergences between
// fitted laws; KolmogorovSmirnov compares distribution functions.
enum class DistanceKind {
  KullbackLeibler,
  Triangular,
  Bhattacharyya,
  ArithmeticGeometric,
  KolmogorovSmirnov,
};

bool is_parametric(DistanceKind kind);

// v = 1/(h'(0) phi''(1)): 1 for KL and Triangular, 4 for Bhattacharyya and
// Arithmetic-Geometric.
double v_constant(DistanceKind kind);

std::string to_string(DistanceKind kind);
DistanceKind distance_kind_from_string(const std::string& name);

enum class ReferenceLaw { ChiSquare, Kolmogorov };

struct TestResult {
  DistanceKind kind;
  double distance;
  double statistic;
  double p_value;
  ReferenceLaw law;
  int dof;  // meaningful for ReferenceLaw::ChiSquare
  std::size_t m;
  std::size_t n;
};

// Directed divergence h( integral phi(f_p/f_q) f_q dz ) by adaptive
// quadrature on the transformed half line. Indeterminate 0/0 and 0*log(0)
// integrand forms evaluate to zero. Throws NumericalError when the
// quadrature fails to converge (and, for Bhattacharyya, when the inner
// integral reaches 1).
double hphi_divergence(DistanceKind kind, const G0Params& p, const G0Params& q);

// Symmetrized distance (D(p,q) + D(q,p)) / 2.
double hphi_distance(DistanceKind kind, const G0Params& p, const G0Params& q);

// sup_z |F_p(z) - F_q(z)| located by a log-spaced grid scan over both laws'
// quantile ranges followed by golden-section refinement.
double analytic_ks_distance(const G0Params& p, const G0Params& q);

// S = (2 m n v / (m+n)) d with the chi-square(2) p-value of Proposition-style
// asymptotics; requires a parametric kind.
TestResult test_statistic(DistanceKind kind, const G0Params& p_hat,
                          const G0Params& q_hat, std::size_t m, std::size_t n);

// Mean of the four (h,phi)-distances and the analytic KS distance.
double mean_discrepancy(const G0Params& p_hat, const G0Params& q_hat);

}  // namespace g0
