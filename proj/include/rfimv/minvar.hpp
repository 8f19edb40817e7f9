#pragma once

#include <Eigen/Dense>

#include "rfimv/core.hpp"

// Equality-constrained quadratic program: minimize A^T Sigma A subject to
// 1^T A = 1. The stationarity system couples Sigma A + lambda 1 = 0 with the
// constraint row; for positive definite Sigma the unique solution is
// A = Sigma^{-1} 1 / (1^T Sigma^{-1} 1).
namespace rfimv {

// Outcome of the symmetric triangular factorization used to decide whether
// the problem has a unique solution.
struct FactorizationReport {
  bool is_positive_definite = false;
  double min_pivot = 0.0;
  double condition_hint = 0.0;  // max pivot / min pivot; +inf when min <= 0
};

// Factorizes the covariance and reports pivot health without solving.
// Positive definite means every pivot exceeds 1e-12 * max(diagonal).
FactorizationReport assess_covariance(const RfiStatistics& statistics);

// Solves the constrained problem for validated statistics. The returned
// weights sum to one exactly (renormalized by their computed sum), the
// multiplier equals -1 / (1^T Sigma^{-1} 1), and min_variance is the
// quadratic form at the solution. Throws NotPositiveDefiniteError when a
// factorization pivot falls below 1e-12 * max(diagonal of Sigma).
WeightSolution solve_min_variance_weights(const RfiStatistics& statistics);

// Diagonal-covariance shortcut: weights proportional to inverse variances,
// min_variance the harmonic combination 1 / sum(1/variance_i). Agrees with
// the general solver elementwise to 1e-10 on diagonal covariances.
WeightSolution solve_diagonal_fast_path(const Eigen::VectorXd& variances);

// The quadratic form A^T Sigma A.
double evaluate_error_variance(const Eigen::VectorXd& weights,
                               const RfiStatistics& statistics);

}  // namespace rfimv
