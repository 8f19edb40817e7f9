#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rfimv/core.hpp"

// Comparative Monte Carlo experiment: for each interference-source budget M,
// synthesize T independent footprints, apply both estimators to the shared
// realization, and aggregate signed-error statistics per M.
namespace rfimv {

struct SweepConfig {
  std::vector<int> m_values = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  long trials_per_m = 10000;
  int footprint_size = kDefaultFootprintSize;
  double soil_power = 1.0;
  double beta = 1.0;
  std::uint64_t master_seed = 1;
};

// Throws InvalidParameterError when any field violates its constraints.
void validate_config(const SweepConfig& config);

// One footprint's outcome under both estimators.
struct TrialRecord {
  double weighted_error = 0.0;         // estimate - soil_power
  double baseline_error = 0.0;
  double theoretical_variance = 0.0;   // A^T Sigma A for the trial's weights
  int retained_count = 0;
  bool baseline_fallback = false;
};

// Per-M aggregates over trials_per_m trials. Variances use the population
// (divide-by-T) formula over signed errors.
struct MRecord {
  int m = 0;
  long trials = 0;
  double weighted_mean_error = 0.0;
  double weighted_mean_abs_error = 0.0;
  double weighted_error_variance = 0.0;
  double theoretical_min_variance = 0.0;  // mean of per-trial A^T Sigma A
  double baseline_mean_error = 0.0;
  double baseline_mean_abs_error = 0.0;
  double baseline_error_variance = 0.0;
  long baseline_fallback_count = 0;
  double retained_fraction_mean = 0.0;
};

struct SweepResult {
  SweepConfig config;
  std::vector<MRecord> records;  // one per entry of config.m_values, in order
};

// Synthesizes one footprint, solves for the trial's weights, and evaluates
// both estimators on the shared realization. Deterministic in
// (config.master_seed, max_sources, trial_index); independent trials never
// share a generator stream.
TrialRecord run_trial(int max_sources, const SweepConfig& config, long trial_index);

// Runs all (M, trial) pairs and aggregates per M. Trials may execute on
// `workers` threads; per-trial results land in preassigned slots and are
// reduced in trial order, so the output is bit-identical for any worker
// count. workers < 1 selects the hardware concurrency.
SweepResult run_sweep(const SweepConfig& config, int workers = 1);

// CSV with one header line and one row per M. Numbers use shortest
// round-trip decimal form.
void write_sweep_csv(const SweepResult& result, std::ostream& out);

struct SweepCsvRow {
  MRecord record;
  std::uint64_t seed = 0;
};

// Strict parser for write_sweep_csv output; values round-trip bit-exactly.
std::vector<SweepCsvRow> parse_sweep_csv(std::istream& in);

// JSON document carrying the full config plus the per-M records.
std::string sweep_to_json(const SweepResult& result);
SweepResult sweep_from_json(const std::string& text);

// Two gnuplot-style data files mirroring the comparison figures: mean
// absolute error vs M, and mean squared error vs M, one two-column block per
// estimator separated by blank lines.
void write_plot_data(const SweepResult& result, std::ostream& error_out,
                     std::ostream& variance_out);

}  // namespace rfimv
