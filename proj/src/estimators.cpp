#include "rfimv/estimators.hpp"

#include <cmath>
#include <string>

namespace rfimv {

namespace {

void check_beta(const DetectionConfig& config) {
  if (!(config.beta > 0.0)) {
    throw InvalidParameterError("beta must be positive, got " +
                                std::to_string(config.beta));
  }
}

}  // namespace

Estimate weighted_sum_estimate(const SampleSet& samples,
                               const RfiStatistics& statistics,
                               const WeightSolution& weights) {
  if (samples.size() != statistics.size()) {
    throw DimensionMismatchError(
        "sample count " + std::to_string(samples.size()) +
        " does not match statistics size " + std::to_string(statistics.size()));
  }
  return weighted_sum_estimate(samples, statistics.mean(), weights);
}

Estimate weighted_sum_estimate(const SampleSet& samples,
                               const Eigen::VectorXd& rfi_mean,
                               const WeightSolution& weights) {
  const Eigen::Index n = samples.size();
  if (rfi_mean.size() != n || weights.weights.size() != n) {
    throw DimensionMismatchError(
        "sample count " + std::to_string(n) + ", mean length " +
        std::to_string(rfi_mean.size()) + " and weight length " +
        std::to_string(weights.weights.size()) + " must agree");
  }
  Estimate estimate;
  estimate.value = weights.weights.dot(samples.values() - rfi_mean);
  estimate.method = EstimateMethod::kWeightedSum;
  estimate.diagnostics = WeightedDiagnostics{weights.min_variance};
  return estimate;
}

DetectionResult threshold_detect(const SampleSet& samples,
                                 const DetectionConfig& config) {
  check_beta(config);
  const Eigen::VectorXd& p = samples.values();
  const Eigen::Index n = p.size();

  const double mean = p.mean();
  const double sigma = std::sqrt((p.array() - mean).square().sum() / n);

  DetectionResult result;
  result.flags.assign(static_cast<size_t>(n), false);
  if (sigma == 0.0) {
    result.degenerate_spread = true;
    result.retained_count = static_cast<int>(n);
    return result;
  }

  const double threshold = config.beta * sigma;
  int retained = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool flagged = std::abs(p[i] - mean) >= threshold;
    result.flags[static_cast<size_t>(i)] = flagged;
    if (!flagged) {
      ++retained;
    }
  }
  result.retained_count = retained;
  return result;
}

Estimate baseline_estimate(const SampleSet& samples,
                           const DetectionConfig& config) {
  const DetectionResult detection = threshold_detect(samples, config);
  const Eigen::VectorXd& p = samples.values();

  Estimate estimate;
  estimate.method = EstimateMethod::kBaselineAverage;

  BaselineDiagnostics diagnostics;
  diagnostics.retained_count = detection.retained_count;
  diagnostics.degenerate_spread = detection.degenerate_spread;

  if (detection.retained_count == 0) {
    diagnostics.used_fallback = true;
    estimate.value = p.mean();
  } else {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (!detection.flags[static_cast<size_t>(i)]) {
        sum += p[i];
      }
    }
    estimate.value = sum / detection.retained_count;
  }
  estimate.diagnostics = diagnostics;
  return estimate;
}

}  // namespace rfimv
