#include "rfimv/harness.hpp"

#include <json.hpp>

#include <cmath>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "rfimv/estimators.hpp"
#include "rfimv/io.hpp"
#include "rfimv/minvar.hpp"
#include "rfimv/sim.hpp"

namespace rfimv {

namespace {

constexpr char kCsvHeader[] =
    "M,trials,weighted_mean_error,weighted_mean_abs_error,"
    "weighted_error_variance,theoretical_min_variance,baseline_mean_error,"
    "baseline_mean_abs_error,baseline_error_variance,baseline_fallback_count,"
    "retained_fraction,seed";

// Population statistics in trial-index order, so aggregation is independent
// of how trials were scheduled.
MRecord aggregate(int m, const SweepConfig& config,
                  const std::vector<TrialRecord>& records) {
  const long trials = static_cast<long>(records.size());
  MRecord out;
  out.m = m;
  out.trials = trials;

  double sum_w = 0.0, sum_abs_w = 0.0;
  double sum_b = 0.0, sum_abs_b = 0.0;
  double sum_theo = 0.0, sum_retained = 0.0;
  long fallbacks = 0;
  for (const TrialRecord& r : records) {
    sum_w += r.weighted_error;
    sum_abs_w += std::abs(r.weighted_error);
    sum_b += r.baseline_error;
    sum_abs_b += std::abs(r.baseline_error);
    sum_theo += r.theoretical_variance;
    sum_retained += static_cast<double>(r.retained_count) / config.footprint_size;
    fallbacks += r.baseline_fallback ? 1 : 0;
  }
  out.weighted_mean_error = sum_w / trials;
  out.weighted_mean_abs_error = sum_abs_w / trials;
  out.baseline_mean_error = sum_b / trials;
  out.baseline_mean_abs_error = sum_abs_b / trials;
  out.theoretical_min_variance = sum_theo / trials;
  out.retained_fraction_mean = sum_retained / trials;
  out.baseline_fallback_count = fallbacks;

  double ss_w = 0.0, ss_b = 0.0;
  for (const TrialRecord& r : records) {
    const double dw = r.weighted_error - out.weighted_mean_error;
    const double db = r.baseline_error - out.baseline_mean_error;
    ss_w += dw * dw;
    ss_b += db * db;
  }
  out.weighted_error_variance = ss_w / trials;
  out.baseline_error_variance = ss_b / trials;
  return out;
}

void run_trials_into(int m, const SweepConfig& config, long begin, long end,
                     std::vector<TrialRecord>& slots) {
  for (long t = begin; t < end; ++t) {
    slots[static_cast<size_t>(t)] = run_trial(m, config, t);
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream stream(line);
  while (std::getline(stream, field, ',')) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    fields.emplace_back();
  }
  return fields;
}

nlohmann::json record_to_json(const MRecord& r, std::uint64_t seed) {
  return nlohmann::json{{"M", r.m},
                        {"trials", r.trials},
                        {"weighted_mean_error", r.weighted_mean_error},
                        {"weighted_mean_abs_error", r.weighted_mean_abs_error},
                        {"weighted_error_variance", r.weighted_error_variance},
                        {"theoretical_min_variance", r.theoretical_min_variance},
                        {"baseline_mean_error", r.baseline_mean_error},
                        {"baseline_mean_abs_error", r.baseline_mean_abs_error},
                        {"baseline_error_variance", r.baseline_error_variance},
                        {"baseline_fallback_count", r.baseline_fallback_count},
                        {"retained_fraction", r.retained_fraction_mean},
                        {"seed", seed}};
}

// Second moment of the signed error about zero; exact given population
// aggregation. This is the variance-style quantity the comparison figures
// track for a biased estimator.
double mean_squared_error(double mean_error, double error_variance) {
  return error_variance + mean_error * mean_error;
}

}  // namespace

void validate_config(const SweepConfig& config) {
  if (config.m_values.empty()) {
    throw InvalidParameterError("m_values must not be empty");
  }
  for (int m : config.m_values) {
    if (m < 1) {
      throw InvalidParameterError("every M must be >= 1, got " +
                                  std::to_string(m));
    }
  }
  if (config.trials_per_m < 1) {
    throw InvalidParameterError("trials_per_m must be >= 1, got " +
                                std::to_string(config.trials_per_m));
  }
  if (config.footprint_size < 2) {
    throw InvalidParameterError("footprint_size must be >= 2, got " +
                                std::to_string(config.footprint_size));
  }
  if (!(config.soil_power >= 0.0) || !std::isfinite(config.soil_power)) {
    throw InvalidParameterError("soil_power must be finite and >= 0");
  }
  if (!(config.beta > 0.0) || !std::isfinite(config.beta)) {
    throw InvalidParameterError("beta must be finite and > 0");
  }
}

TrialRecord run_trial(int max_sources, const SweepConfig& config,
                      long trial_index) {
  if (trial_index < 0) {
    throw InvalidParameterError("trial_index must be >= 0");
  }
  const std::uint64_t m_word = static_cast<std::uint64_t>(max_sources);
  const std::uint64_t t_word = static_cast<std::uint64_t>(trial_index);

  Rng counts_rng(derive_stream_seed(config.master_seed, {m_word, t_word, 0}));
  const std::vector<int> counts =
      draw_active_counts(max_sources, config.footprint_size, counts_rng);

  Rng power_rng(derive_stream_seed(config.master_seed, {m_word, t_word, 1}));
  Eigen::VectorXd powers =
      sample_footprint_powers(counts, config.soil_power, power_rng);

  const Eigen::Index n = static_cast<Eigen::Index>(counts.size());
  Eigen::VectorXd rfi_mean(n);
  Eigen::VectorXd variances(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double k = counts[static_cast<size_t>(i)];
    rfi_mean[i] = k;
    variances[i] = 2.0 * k;
  }

  const WeightSolution weights = solve_diagonal_fast_path(variances);
  const SampleSet samples(std::move(powers));

  const Estimate weighted = weighted_sum_estimate(samples, rfi_mean, weights);
  const Estimate baseline =
      baseline_estimate(samples, DetectionConfig{.beta = config.beta});
  const auto& diagnostics = std::get<BaselineDiagnostics>(baseline.diagnostics);

  TrialRecord record;
  record.weighted_error = weighted.value - config.soil_power;
  record.baseline_error = baseline.value - config.soil_power;
  record.theoretical_variance = weights.min_variance;
  record.retained_count = diagnostics.retained_count;
  record.baseline_fallback = diagnostics.used_fallback;
  return record;
}

SweepResult run_sweep(const SweepConfig& config, int workers) {
  validate_config(config);
  if (workers < 1) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) {
      workers = 1;
    }
  }

  SweepResult result;
  result.config = config;
  result.records.reserve(config.m_values.size());

  const long trials = config.trials_per_m;
  std::vector<TrialRecord> slots(static_cast<size_t>(trials));
  for (int m : config.m_values) {
    const long chunk_count = std::min<long>(workers, trials);
    if (chunk_count <= 1) {
      run_trials_into(m, config, 0, trials, slots);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<size_t>(chunk_count));
      std::exception_ptr first_error;
      std::mutex error_mutex;
      const long per_chunk = (trials + chunk_count - 1) / chunk_count;
      for (long c = 0; c < chunk_count; ++c) {
        const long begin = c * per_chunk;
        const long end = std::min(trials, begin + per_chunk);
        pool.emplace_back([&, begin, end] {
          try {
            run_trials_into(m, config, begin, end, slots);
          } catch (...) {
            std::scoped_lock lock(error_mutex);
            if (!first_error) {
              first_error = std::current_exception();
            }
          }
        });
      }
      for (std::thread& thread : pool) {
        thread.join();
      }
      if (first_error) {
        std::rethrow_exception(first_error);
      }
    }
    result.records.push_back(aggregate(m, config, slots));
  }
  return result;
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const MRecord& r : result.records) {
    out << r.m << ',' << r.trials << ',' << format_double(r.weighted_mean_error)
        << ',' << format_double(r.weighted_mean_abs_error) << ','
        << format_double(r.weighted_error_variance) << ','
        << format_double(r.theoretical_min_variance) << ','
        << format_double(r.baseline_mean_error) << ','
        << format_double(r.baseline_mean_abs_error) << ','
        << format_double(r.baseline_error_variance) << ','
        << r.baseline_fallback_count << ','
        << format_double(r.retained_fraction_mean) << ','
        << result.config.master_seed << '\n';
  }
}

std::vector<SweepCsvRow> parse_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("empty CSV input");
  }
  if (line != kCsvHeader) {
    throw ParseError("unexpected CSV header: '" + line + "'");
  }
  std::vector<SweepCsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 12) {
      throw ParseError("expected 12 CSV fields, got " +
                       std::to_string(fields.size()));
    }
    SweepCsvRow row;
    row.record.m = static_cast<int>(parse_integer(fields[0]));
    row.record.trials = parse_integer(fields[1]);
    row.record.weighted_mean_error = parse_double(fields[2]);
    row.record.weighted_mean_abs_error = parse_double(fields[3]);
    row.record.weighted_error_variance = parse_double(fields[4]);
    row.record.theoretical_min_variance = parse_double(fields[5]);
    row.record.baseline_mean_error = parse_double(fields[6]);
    row.record.baseline_mean_abs_error = parse_double(fields[7]);
    row.record.baseline_error_variance = parse_double(fields[8]);
    row.record.baseline_fallback_count = parse_integer(fields[9]);
    row.record.retained_fraction_mean = parse_double(fields[10]);
    row.seed = parse_unsigned(fields[11]);
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_to_json(const SweepResult& result) {
  nlohmann::json doc;
  doc["config"] = {{"m_values", result.config.m_values},
                   {"trials_per_m", result.config.trials_per_m},
                   {"footprint_size", result.config.footprint_size},
                   {"soil_power", result.config.soil_power},
                   {"beta", result.config.beta},
                   {"master_seed", result.config.master_seed}};
  doc["results"] = nlohmann::json::array();
  for (const MRecord& r : result.records) {
    doc["results"].push_back(record_to_json(r, result.config.master_seed));
  }
  return doc.dump(2) + "\n";
}

SweepResult sweep_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  try {
    SweepResult result;
    const nlohmann::json& config = doc.at("config");
    result.config.m_values = config.at("m_values").get<std::vector<int>>();
    result.config.trials_per_m = config.at("trials_per_m").get<long>();
    result.config.footprint_size = config.at("footprint_size").get<int>();
    result.config.soil_power = config.at("soil_power").get<double>();
    result.config.beta = config.at("beta").get<double>();
    result.config.master_seed = config.at("master_seed").get<std::uint64_t>();
    for (const nlohmann::json& entry : doc.at("results")) {
      MRecord r;
      r.m = entry.at("M").get<int>();
      r.trials = entry.at("trials").get<long>();
      r.weighted_mean_error = entry.at("weighted_mean_error").get<double>();
      r.weighted_mean_abs_error =
          entry.at("weighted_mean_abs_error").get<double>();
      r.weighted_error_variance =
          entry.at("weighted_error_variance").get<double>();
      r.theoretical_min_variance =
          entry.at("theoretical_min_variance").get<double>();
      r.baseline_mean_error = entry.at("baseline_mean_error").get<double>();
      r.baseline_mean_abs_error =
          entry.at("baseline_mean_abs_error").get<double>();
      r.baseline_error_variance =
          entry.at("baseline_error_variance").get<double>();
      r.baseline_fallback_count =
          entry.at("baseline_fallback_count").get<long>();
      r.retained_fraction_mean = entry.at("retained_fraction").get<double>();
      result.records.push_back(r);
    }
    return result;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("unexpected JSON structure: ") + e.what());
  }
}

void write_plot_data(const SweepResult& result, std::ostream& error_out,
                     std::ostream& variance_out) {
  error_out << "# mean absolute estimation error vs max interference sources\n";
  error_out << "# series: weighted\n";
  for (const MRecord& r : result.records) {
    error_out << r.m << ' ' << format_double(r.weighted_mean_abs_error) << '\n';
  }
  error_out << "\n# series: baseline\n";
  for (const MRecord& r : result.records) {
    error_out << r.m << ' ' << format_double(r.baseline_mean_abs_error) << '\n';
  }

  variance_out << "# mean squared estimation error vs max interference sources\n";
  variance_out << "# series: weighted\n";
  for (const MRecord& r : result.records) {
    variance_out << r.m << ' '
                 << format_double(mean_squared_error(
                        r.weighted_mean_error, r.weighted_error_variance))
                 << '\n';
  }
  variance_out << "\n# series: baseline\n";
  for (const MRecord& r : result.records) {
    variance_out << r.m << ' '
                 << format_double(mean_squared_error(
                        r.baseline_mean_error, r.baseline_error_variance))
                 << '\n';
  }
}

}  // namespace rfimv
