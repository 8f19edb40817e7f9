#include "rfimv/minvar.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace rfimv {

namespace {

constexpr double kPivotRelativeTolerance = 1e-12;

struct Ldlt {
  Eigen::MatrixXd lower;  // unit lower triangle, pivots on the diagonal
  FactorizationReport report;
};

// Unpivoted LDL^T in natural order. Stops at the first pivot below the
// scale-invariant tolerance; the report then carries the offending pivot.
Ldlt factorize(const Eigen::MatrixXd& sigma) {
  const Eigen::Index n = sigma.rows();
  const double pivot_floor = kPivotRelativeTolerance * sigma.diagonal().maxCoeff();

  Ldlt result;
  Eigen::MatrixXd& l = result.lower;
  l = Eigen::MatrixXd::Zero(n, n);
  double min_pivot = std::numeric_limits<double>::infinity();
  double max_pivot = 0.0;

  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = sigma(j, j);
    for (Eigen::Index k = 0; k < j; ++k) {
      pivot -= l(j, k) * l(j, k) * l(k, k);
    }
    min_pivot = std::min(min_pivot, pivot);
    max_pivot = std::max(max_pivot, pivot);
    if (!(pivot >= pivot_floor)) {
      result.report.is_positive_definite = false;
      result.report.min_pivot = min_pivot;
      result.report.condition_hint =
          min_pivot > 0.0 ? max_pivot / min_pivot
                          : std::numeric_limits<double>::infinity();
      return result;
    }
    l(j, j) = pivot;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double sum = sigma(i, j);
      for (Eigen::Index k = 0; k < j; ++k) {
        sum -= l(i, k) * l(j, k) * l(k, k);
      }
      l(i, j) = sum / pivot;
    }
  }

  result.report.is_positive_definite = true;
  result.report.min_pivot = min_pivot;
  result.report.condition_hint = max_pivot / min_pivot;
  return result;
}

// Solves L D L^T x = b given the combined factor from factorize().
Eigen::VectorXd solve_ldlt(const Eigen::MatrixXd& l, const Eigen::VectorXd& b) {
  const Eigen::Index n = b.size();
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double sum = b[i];
    for (Eigen::Index k = 0; k < i; ++k) {
      sum -= l(i, k) * x[k];
    }
    x[i] = sum;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    x[i] /= l(i, i);
  }
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double sum = x[i];
    for (Eigen::Index k = i + 1; k < n; ++k) {
      sum -= l(k, i) * x[k];
    }
    x[i] = sum;
  }
  return x;
}

}  // namespace

FactorizationReport assess_covariance(const RfiStatistics& statistics) {
  return factorize(statistics.covariance()).report;
}

WeightSolution solve_min_variance_weights(const RfiStatistics& statistics) {
  const Eigen::MatrixXd& sigma = statistics.covariance();
  const Ldlt ldlt = factorize(sigma);
  if (!ldlt.report.is_positive_definite) {
    throw NotPositiveDefiniteError(
        "covariance is not positive definite (min pivot " +
        std::to_string(ldlt.report.min_pivot) + ")");
  }

  // Sigma y = 1, then normalize. Equivalent to the bordered stationarity
  // system but keeps the factorization on the positive definite block.
  const Eigen::VectorXd y =
      solve_ldlt(ldlt.lower, Eigen::VectorXd::Ones(sigma.rows()));
  const double y_sum = y.sum();

  WeightSolution solution;
  solution.weights = y / y_sum;
  solution.weights /= solution.weights.sum();  // constraint to machine precision
  solution.multiplier = -1.0 / y_sum;
  solution.min_variance = evaluate_error_variance(solution.weights, statistics);
  return solution;
}

WeightSolution solve_diagonal_fast_path(const Eigen::VectorXd& variances) {
  const Eigen::Index n = variances.size();
  if (n < 2) {
    throw InvalidParameterError("need at least 2 variances, got " +
                                std::to_string(n));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(variances[i] > 0.0) || !std::isfinite(variances[i])) {
      throw NonpositiveVarianceError("variance entry " + std::to_string(i) +
                                     " is not a positive finite value");
    }
  }

  const Eigen::VectorXd inverse = variances.cwiseInverse();
  const double total = inverse.sum();

  WeightSolution solution;
  solution.weights = inverse / total;
  solution.weights /= solution.weights.sum();
  solution.multiplier = -1.0 / total;
  solution.min_variance = 1.0 / total;
  return solution;
}

double evaluate_error_variance(const Eigen::VectorXd& weights,
                               const RfiStatistics& statistics) {
  if (weights.size() != statistics.size()) {
    throw DimensionMismatchError(
        "weight length " + std::to_string(weights.size()) +
        " does not match statistics size " + std::to_string(statistics.size()));
  }
  return weights.dot(statistics.covariance() * weights);
}

}  // namespace rfimv
