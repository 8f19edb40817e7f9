#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "rfimv/core.hpp"

// Synthetic interference environments: per-sample active-source counts drawn
// uniformly from {1..M}, per-sample power drawn as a sum of squared standard
// normals, and the matching ground-truth statistics mu_i = k_i,
// Sigma = diag(2 k_i).
namespace rfimv {

using Rng = std::mt19937_64;

// Counter-based seed splitting: avalanches the master seed with each stream
// word so distinct (word...) tuples get statistically independent streams,
// independent of thread scheduling.
std::uint64_t derive_stream_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> words);

// One simulated footprint's description: source budget, per-sample active
// counts, true soil power, and the seed for its power draws.
struct RfiEnvironment {
  int max_sources = 1;             // M >= 1
  std::vector<int> active_counts;  // each in [1, M], length >= 2
  double soil_power = 1.0;         // Watts, >= 0
  std::uint64_t seed = 0;
};

// n i.i.d. uniform draws from {1..max_sources}.
std::vector<int> draw_active_counts(int max_sources, int n, Rng& rng);

// Ground-truth statistics implied by the active counts: mean k_i, variance
// 2 k_i, zero cross terms.
RfiStatistics derive_statistics(const std::vector<int>& active_counts);

// Sum of active_count squared standard normals; chi-squared with
// active_count degrees of freedom.
double draw_rfi_power(int active_count, Rng& rng);

// soil_power + one interference draw per sample, consuming rng in sample
// order exactly as repeated draw_rfi_power calls would.
Eigen::VectorXd sample_footprint_powers(const std::vector<int>& active_counts,
                                        double soil_power, Rng& rng);

// Full synthesis of one footprint plus the statistics the estimator is
// entitled to know. Identical output for identical environment contents.
std::pair<SampleSet, RfiStatistics> synthesize_footprint(const RfiEnvironment& env);

}  // namespace rfimv
