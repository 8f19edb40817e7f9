#pragma once

#include <Eigen/Dense>

#include <vector>

#include "rfimv/core.hpp"

// The two competing footprint estimators: the mean-corrected weighted sum,
// and the detect-then-average baseline that thresholds on deviation from the
// footprint's own sample mean.
namespace rfimv {

// Threshold-test configuration. The deviation of each sample from the
// footprint's arithmetic mean is compared against beta times the population
// standard deviation of the samples.
struct DetectionConfig {
  enum class CenterMode { kSampleArithmeticMean };
  enum class SpreadMode { kPopulationStdDev };

  double beta = 1.0;  // must be > 0
  CenterMode center_mode = CenterMode::kSampleArithmeticMean;
  SpreadMode spread_mode = SpreadMode::kPopulationStdDev;
};

struct DetectionResult {
  std::vector<bool> flags;         // true = flagged as interference
  int retained_count = 0;          // number of unflagged samples
  bool degenerate_spread = false;  // zero spread: test skipped, all pass
};

// Weighted-sum estimate sum_i A_i (p_i - mu_i). The constraint 1^T A = 1
// makes the estimate translation-equivariant in the samples, which is what
// removes the interference bias.
Estimate weighted_sum_estimate(const SampleSet& samples,
                               const RfiStatistics& statistics,
                               const WeightSolution& weights);

// Same estimate from the interference mean vector alone; the covariance
// never enters the formula.
Estimate weighted_sum_estimate(const SampleSet& samples,
                               const Eigen::VectorXd& rfi_mean,
                               const WeightSolution& weights);

// Flags every sample whose deviation from the sample mean reaches
// beta * sigma. Zero sigma (all samples identical) is reported as a
// degenerate all-pass rather than flagging everything.
DetectionResult threshold_detect(const SampleSet& samples,
                                 const DetectionConfig& config);

// Mean of the samples that pass the threshold test, with no mean
// subtraction. When every sample is flagged, falls back to the mean of all
// samples and marks the fallback in the diagnostics.
Estimate baseline_estimate(const SampleSet& samples,
                           const DetectionConfig& config);

}  // namespace rfimv
