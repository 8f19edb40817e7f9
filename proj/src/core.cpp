#include "rfimv/core.hpp"

#include <cmath>

namespace rfimv {

namespace {

constexpr double kSymmetryTolerance = 1e-12;

void check_sample_index(const SampleIndex& index) {
  const int pol = static_cast<int>(index.polarization);
  if (pol < 0 || pol >= kPolarizationCount || index.subband < 0 ||
      index.subband >= kSubbandCount || index.timeslot < 0 ||
      index.timeslot >= kTimeslotCount) {
    throw InvalidParameterError("sample index out of range: polarization=" +
                                std::to_string(pol) +
                                " subband=" + std::to_string(index.subband) +
                                " timeslot=" + std::to_string(index.timeslot));
  }
}

}  // namespace

int flat_index(const SampleIndex& index) {
  check_sample_index(index);
  return static_cast<int>(index.polarization) * kSubbandCount * kTimeslotCount +
         index.subband * kTimeslotCount + index.timeslot;
}

SampleSet::SampleSet(Eigen::VectorXd values) : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw InvalidParameterError("sample set needs at least 2 values, got " +
                                std::to_string(values_.size()));
  }
  if (!values_.allFinite()) {
    throw InvalidParameterError("sample set contains non-finite values");
  }
}

double SampleSet::at(const SampleIndex& index) const {
  if (values_.size() != kDefaultFootprintSize) {
    throw InvalidParameterError(
        "labeled access requires a full " +
        std::to_string(kDefaultFootprintSize) + "-sample footprint, got " +
        std::to_string(values_.size()));
  }
  return values_[flat_index(index)];
}

RfiStatistics::RfiStatistics(Eigen::VectorXd mean, Eigen::MatrixXd covariance)
    : mean_(std::move(mean)), covariance_(std::move(covariance)) {
  const Eigen::Index n = mean_.size();
  if (covariance_.rows() != n || covariance_.cols() != n) {
    throw DimensionMismatchError(
        "mean length " + std::to_string(n) + " does not match covariance " +
        std::to_string(covariance_.rows()) + "x" +
        std::to_string(covariance_.cols()));
  }
  if (n < 2) {
    throw InvalidParameterError("statistics need at least 2 entries, got " +
                                std::to_string(n));
  }
  if (!mean_.allFinite() || !covariance_.allFinite()) {
    throw InvalidParameterError("statistics contain non-finite values");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double a = covariance_(i, j);
      const double b = covariance_(j, i);
      const double scale = std::max({std::abs(a), std::abs(b), 1.0});
      if (std::abs(a - b) > kSymmetryTolerance * scale) {
        throw AsymmetricCovarianceError(
            "covariance asymmetric at (" + std::to_string(i) + "," +
            std::to_string(j) + "): " + std::to_string(a) + " vs " +
            std::to_string(b));
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(covariance_(i, i) > 0.0)) {
      throw NonpositiveDiagonalError("covariance diagonal entry " +
                                     std::to_string(i) + " is not positive");
    }
  }
  // Repair last-digit asymmetry by averaging. Exact for already-symmetric
  // input, so validation is idempotent.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double s = 0.5 * (covariance_(i, j) + covariance_(j, i));
      covariance_(i, j) = s;
      covariance_(j, i) = s;
    }
  }
}

RfiStatistics validate_statistics(Eigen::VectorXd mean, Eigen::MatrixXd covariance) {
  return RfiStatistics(std::move(mean), std::move(covariance));
}

RfiStatistics validate_statistics(const RfiStatistics& statistics) {
  return RfiStatistics(statistics.mean(), statistics.covariance());
}

}  // namespace rfimv
