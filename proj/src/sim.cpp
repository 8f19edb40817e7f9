#include "rfimv/sim.hpp"

#include <cmath>
#include <string>

namespace rfimv {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t avalanche(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

void check_counts(const std::vector<int>& active_counts, int max_sources) {
  if (active_counts.size() < 2) {
    throw InvalidParameterError("need at least 2 samples, got " +
                                std::to_string(active_counts.size()));
  }
  for (int k : active_counts) {
    if (k < 1 || (max_sources > 0 && k > max_sources)) {
      throw InvalidParameterError("active count " + std::to_string(k) +
                                  " outside [1, " +
                                  std::to_string(max_sources) + "]");
    }
  }
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = avalanche(master + kGolden);
  for (std::uint64_t w : words) {
    h = avalanche(h ^ (w + kGolden));
  }
  return h;
}

std::vector<int> draw_active_counts(int max_sources, int n, Rng& rng) {
  if (max_sources < 1) {
    throw InvalidParameterError("max_sources must be >= 1, got " +
                                std::to_string(max_sources));
  }
  if (n < 2) {
    throw InvalidParameterError("need at least 2 samples, got " +
                                std::to_string(n));
  }
  std::uniform_int_distribution<int> uniform(1, max_sources);
  std::vector<int> counts(static_cast<size_t>(n));
  for (int& k : counts) {
    k = uniform(rng);
  }
  return counts;
}

RfiStatistics derive_statistics(const std::vector<int>& active_counts) {
  check_counts(active_counts, 0);
  const Eigen::Index n = static_cast<Eigen::Index>(active_counts.size());
  Eigen::VectorXd mean(n);
  Eigen::MatrixXd covariance = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double k = active_counts[static_cast<size_t>(i)];
    mean[i] = k;
    covariance(i, i) = 2.0 * k;
  }
  return RfiStatistics(std::move(mean), std::move(covariance));
}

double draw_rfi_power(int active_count, Rng& rng) {
  if (active_count < 1) {
    throw InvalidParameterError("active count must be >= 1, got " +
                                std::to_string(active_count));
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  double power = 0.0;
  for (int j = 0; j < active_count; ++j) {
    const double z = normal(rng);
    power += z * z;
  }
  return power;
}

Eigen::VectorXd sample_footprint_powers(const std::vector<int>& active_counts,
                                        double soil_power, Rng& rng) {
  check_counts(active_counts, 0);
  if (!(soil_power >= 0.0) || !std::isfinite(soil_power)) {
    throw InvalidParameterError("soil power must be finite and >= 0, got " +
                                std::to_string(soil_power));
  }
  const Eigen::Index n = static_cast<Eigen::Index>(active_counts.size());
  Eigen::VectorXd powers(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    powers[i] = soil_power + draw_rfi_power(active_counts[static_cast<size_t>(i)], rng);
  }
  return powers;
}

std::pair<SampleSet, RfiStatistics> synthesize_footprint(const RfiEnvironment& env) {
  if (env.max_sources < 1) {
    throw InvalidParameterError("max_sources must be >= 1, got " +
                                std::to_string(env.max_sources));
  }
  check_counts(env.active_counts, env.max_sources);
  Rng rng(env.seed);
  Eigen::VectorXd powers =
      sample_footprint_powers(env.active_counts, env.soil_power, rng);
  return {SampleSet(std::move(powers)), derive_statistics(env.active_counts)};
}

}  // namespace rfimv
