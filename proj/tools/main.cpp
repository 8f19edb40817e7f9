#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rfimv/estimators.hpp"
#include "rfimv/harness.hpp"
#include "rfimv/io.hpp"
#include "rfimv/minvar.hpp"

namespace {

namespace fs = std::filesystem;

// Exit codes, also documented in the README:
//   0 success, 1 unexpected error, 2 parse/config error,
//   3 covariance not positive definite, 4 dimension mismatch, 5 I/O failure.
constexpr int kExitUnexpected = 1;
constexpr int kExitParse = 2;
constexpr int kExitNotPositiveDefinite = 3;
constexpr int kExitDimensionMismatch = 4;
constexpr int kExitIo = 5;

void print_weights(const rfimv::WeightSolution& solution) {
  std::ostringstream line;
  for (Eigen::Index i = 0; i < solution.weights.size(); ++i) {
    line << (i ? " " : "") << rfimv::format_double(solution.weights[i]);
  }
  std::cout << "n " << solution.weights.size() << '\n'
            << "weights " << line.str() << '\n'
            << "lambda " << rfimv::format_double(solution.multiplier) << '\n'
            << "min_variance " << rfimv::format_double(solution.min_variance)
            << '\n';
}

int cmd_weights(const std::string& stats_path) {
  const rfimv::RfiStatistics statistics =
      rfimv::read_statistics_file(stats_path);
  const rfimv::WeightSolution solution =
      rfimv::solve_min_variance_weights(statistics);
  print_weights(solution);
  return 0;
}

int cmd_estimate(const std::string& samples_path, const std::string& stats_path,
                 const std::string& method, double beta) {
  const rfimv::SampleSet samples = rfimv::read_samples_file(samples_path);
  const rfimv::RfiStatistics statistics =
      rfimv::read_statistics_file(stats_path);
  if (samples.size() != statistics.size()) {
    throw rfimv::DimensionMismatchError(
        "sample count " + std::to_string(samples.size()) +
        " does not match statistics size " + std::to_string(statistics.size()));
  }

  if (method == "weighted") {
    const rfimv::WeightSolution solution =
        rfimv::solve_min_variance_weights(statistics);
    const rfimv::Estimate estimate =
        rfimv::weighted_sum_estimate(samples, statistics, solution);
    const auto& diagnostics =
        std::get<rfimv::WeightedDiagnostics>(estimate.diagnostics);
    std::cout << "estimate " << rfimv::format_double(estimate.value) << '\n'
              << "method weighted\n"
              << "theoretical_variance "
              << rfimv::format_double(diagnostics.theoretical_variance) << '\n';
  } else {
    const rfimv::Estimate estimate =
        rfimv::baseline_estimate(samples, rfimv::DetectionConfig{.beta = beta});
    const auto& diagnostics =
        std::get<rfimv::BaselineDiagnostics>(estimate.diagnostics);
    std::cout << "estimate " << rfimv::format_double(estimate.value) << '\n'
              << "method baseline\n"
              << "retained " << diagnostics.retained_count << '\n'
              << "fallback " << (diagnostics.used_fallback ? 1 : 0) << '\n'
              << "degenerate_spread " << (diagnostics.degenerate_spread ? 1 : 0)
              << '\n';
  }
  return 0;
}

std::vector<int> parse_m_values(const std::string& text) {
  std::string normalized = text;
  for (char& c : normalized) {
    if (c == ',') {
      c = ' ';
    }
  }
  std::istringstream stream(normalized);
  std::vector<int> values;
  std::string token;
  while (stream >> token) {
    values.push_back(static_cast<int>(rfimv::parse_integer(token)));
  }
  if (values.empty()) {
    throw rfimv::ParseError("m_values must list at least one integer");
  }
  return values;
}

struct SimulateOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::string format = "both";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int workers = 0;  // 0 = hardware concurrency
};

rfimv::SweepConfig build_sweep_config(
    const SimulateOptions& options,
    const std::map<std::string, std::string>& entries) {
  rfimv::SweepConfig config;
  bool config_has_seed = false;
  for (const auto& [key, value] : entries) {
    if (key == "m_values") {
      config.m_values = parse_m_values(value);
    } else if (key == "trials_per_m") {
      config.trials_per_m = rfimv::parse_integer(value);
    } else if (key == "footprint_size") {
      config.footprint_size =
          static_cast<int>(rfimv::parse_integer(value));
    } else if (key == "soil_power") {
      config.soil_power = rfimv::parse_double(value);
    } else if (key == "beta") {
      config.beta = rfimv::parse_double(value);
    } else if (key == "seed") {
      config.master_seed = rfimv::parse_unsigned(value);
      config_has_seed = true;
    } else if (key == "out" || key == "format") {
      // Output selection, consumed by cmd_simulate.
    } else {
      throw rfimv::ParseError(options.config_path + ": unknown key '" + key +
                              "'");
    }
  }

  // Flag beats config beats environment beats default.
  if (options.seed_given) {
    config.master_seed = options.seed;
  } else if (!config_has_seed) {
    if (const char* env = std::getenv("RFI_MVUE_SEED")) {
      config.master_seed = rfimv::parse_unsigned(env);
    }
  }
  return config;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) {
    throw rfimv::IoError("cannot open " + path.string() + " for writing");
  }
  out << content;
  out.flush();
  if (!out) {
    throw rfimv::IoError("failed writing " + path.string());
  }
}

int cmd_simulate(const SimulateOptions& options, const CLI::App& cmd) {
  SimulateOptions effective = options;
  const std::map<std::string, std::string> entries =
      rfimv::read_config_file(options.config_path);
  if (auto it = entries.find("out"); it != entries.end() && cmd.count("--out") == 0) {
    effective.out_dir = it->second;
  }
  if (auto it = entries.find("format");
      it != entries.end() && cmd.count("--format") == 0) {
    effective.format = it->second;
  }
  if (effective.format != "csv" && effective.format != "json" &&
      effective.format != "both") {
    throw rfimv::ParseError("format must be csv, json or both, got '" +
                            effective.format + "'");
  }

  const rfimv::SweepConfig config = build_sweep_config(effective, entries);
  rfimv::validate_config(config);

  const rfimv::SweepResult result = rfimv::run_sweep(config, effective.workers);

  std::error_code ec;
  fs::create_directories(effective.out_dir, ec);
  if (ec) {
    throw rfimv::IoError("cannot create output directory " +
                         effective.out_dir + ": " + ec.message());
  }
  const fs::path out_dir(effective.out_dir);

  std::ostringstream csv;
  rfimv::write_sweep_csv(result, csv);
  if (effective.format == "csv" || effective.format == "both") {
    write_text_file(out_dir / "sweep.csv", csv.str());
    std::cerr << "wrote " << (out_dir / "sweep.csv").string() << '\n';
  }
  if (effective.format == "json" || effective.format == "both") {
    write_text_file(out_dir / "sweep.json", rfimv::sweep_to_json(result));
    std::cerr << "wrote " << (out_dir / "sweep.json").string() << '\n';
  }

  std::ostringstream error_plot;
  std::ostringstream variance_plot;
  rfimv::write_plot_data(result, error_plot, variance_plot);
  write_text_file(out_dir / "error_vs_m.dat", error_plot.str());
  write_text_file(out_dir / "error_variance_vs_m.dat", variance_plot.str());
  std::cerr << "wrote " << (out_dir / "error_vs_m.dat").string() << '\n';
  std::cerr << "wrote " << (out_dir / "error_variance_vs_m.dat").string()
            << '\n';

  std::cout << csv.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-variance soil-power estimation under additive RFI"};
  app.require_subcommand(1);

  std::string weights_stats;
  CLI::App* weights_cmd = app.add_subcommand(
      "weights", "Compute minimum-variance weights from a statistics file");
  weights_cmd->add_option("--stats", weights_stats, "statistics file")
      ->required();

  std::string estimate_samples;
  std::string estimate_stats;
  std::string estimate_method;
  double estimate_beta = 1.0;
  CLI::App* estimate_cmd = app.add_subcommand(
      "estimate", "Estimate soil power from sample and statistics files");
  estimate_cmd->add_option("--samples", estimate_samples, "sample file")
      ->required();
  estimate_cmd->add_option("--stats", estimate_stats, "statistics file")
      ->required();
  estimate_cmd
      ->add_option("--method", estimate_method, "weighted or baseline")
      ->required()
      ->check(CLI::IsMember({"weighted", "baseline"}));
  estimate_cmd->add_option("--beta", estimate_beta,
                           "threshold multiplier (baseline only)");

  SimulateOptions simulate_options;
  CLI::App* simulate_cmd = app.add_subcommand(
      "simulate", "Run the comparative Monte Carlo sweep from a config file");
  simulate_cmd
      ->add_option("--config", simulate_options.config_path, "config file")
      ->required();
  CLI::Option* seed_option = simulate_cmd->add_option(
      "--seed", simulate_options.seed, "master seed (overrides config)");
  simulate_cmd->add_option("--workers", simulate_options.workers,
                           "worker threads (0 = hardware concurrency)");
  simulate_cmd->add_option("--out", simulate_options.out_dir,
                           "output directory");
  simulate_cmd
      ->add_option("--format", simulate_options.format, "csv, json or both")
      ->check(CLI::IsMember({"csv", "json", "both"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return kExitParse;
  }

  try {
    if (weights_cmd->parsed()) {
      return cmd_weights(weights_stats);
    }
    if (estimate_cmd->parsed()) {
      return cmd_estimate(estimate_samples, estimate_stats, estimate_method,
                          estimate_beta);
    }
    simulate_options.seed_given = seed_option->count() > 0;
    return cmd_simulate(simulate_options, *simulate_cmd);
  } catch (const rfimv::NotPositiveDefiniteError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNotPositiveDefinite;
  } catch (const rfimv::DimensionMismatchError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDimensionMismatch;
  } catch (const rfimv::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const rfimv::Error& e) {
    // Parse errors and invalid parameter/statistics values in inputs.
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return kExitUnexpected;
  }
}
