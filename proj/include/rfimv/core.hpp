#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <variant>

// Core domain types for footprint-level power estimation under additive
// interference: sample vectors, interference statistics, weight solutions,
// and estimates. All types are immutable after construction and safe to
// share between threads.
namespace rfimv {

inline constexpr int kSubbandCount = 16;
inline constexpr int kTimeslotCount = 8;
inline constexpr int kPolarizationCount = 2;
// 2 polarizations x 16 subbands x 8 time slots per antenna footprint.
inline constexpr int kDefaultFootprintSize =
    kPolarizationCount * kSubbandCount * kTimeslotCount;

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

class DimensionMismatchError : public Error {
 public:
  explicit DimensionMismatchError(const std::string& message) : Error(message) {}
};

class AsymmetricCovarianceError : public Error {
 public:
  explicit AsymmetricCovarianceError(const std::string& message) : Error(message) {}
};

class NonpositiveDiagonalError : public Error {
 public:
  explicit NonpositiveDiagonalError(const std::string& message) : Error(message) {}
};

class NotPositiveDefiniteError : public Error {
 public:
  explicit NotPositiveDefiniteError(const std::string& message) : Error(message) {}
};

class NonpositiveVarianceError : public Error {
 public:
  explicit NonpositiveVarianceError(const std::string& message) : Error(message) {}
};

class InvalidParameterError : public Error {
 public:
  explicit InvalidParameterError(const std::string& message) : Error(message) {}
};

enum class Polarization : int { kHorizontal = 0, kVertical = 1 };

// Position of one frequency-time sample within a 256-sample footprint.
struct SampleIndex {
  Polarization polarization = Polarization::kHorizontal;
  int subband = 0;   // [0, 16)
  int timeslot = 0;  // [0, 8)
};

// Flat position in [0, 256): polarization-major, then subband, then slot.
// Bijective over the valid index ranges.
int flat_index(const SampleIndex& index);

// One footprint's measured power values in Watts. Requires length >= 2 and
// all entries finite.
class SampleSet {
 public:
  explicit SampleSet(Eigen::VectorXd values);

  const Eigen::VectorXd& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }

  // Labeled access, available only for full 256-sample footprints.
  double at(const SampleIndex& index) const;

 private:
  Eigen::VectorXd values_;
};

// Mean vector and covariance matrix of the additive interference power.
// Construction validates dimensions, symmetry (within tolerance, repaired by
// averaging) and strict positivity of the diagonal, so every live instance
// satisfies the invariants.
class RfiStatistics {
 public:
  RfiStatistics(Eigen::VectorXd mean, Eigen::MatrixXd covariance);

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  Eigen::Index size() const { return mean_.size(); }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd covariance_;
};

// Checks mean/covariance dimensions agree, the diagonal is strictly
// positive, and |S_ij - S_ji| <= 1e-12 * max(|S_ij|, |S_ji|, 1); the stored
// covariance is the symmetrized (S + S^T)/2. Idempotent: validating an
// already-validated value reproduces it exactly.
RfiStatistics validate_statistics(Eigen::VectorXd mean, Eigen::MatrixXd covariance);
RfiStatistics validate_statistics(const RfiStatistics& statistics);

// Solution of the minimum-variance weight problem: weights summing to one,
// the multiplier of the bordered stationarity system, and the achieved
// minimum error variance (Watts^2).
struct WeightSolution {
  Eigen::VectorXd weights;
  double multiplier = 0.0;
  double min_variance = 0.0;
};

enum class EstimateMethod { kWeightedSum, kBaselineAverage };

struct WeightedDiagnostics {
  double theoretical_variance = 0.0;
};

struct BaselineDiagnostics {
  int retained_count = 0;        // samples that passed the threshold test
  bool used_fallback = false;    // every sample flagged; averaged all instead
  bool degenerate_spread = false;  // zero spread, test skipped as all-pass
};

// A soil-power estimate in Watts with method-specific diagnostics.
struct Estimate {
  double value = 0.0;
  EstimateMethod method = EstimateMethod::kWeightedSum;
  std::variant<WeightedDiagnostics, BaselineDiagnostics> diagnostics;
};

}  // namespace rfimv
