#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "flockfab/baseline.hpp"
#include "flockfab/engine.hpp"
#include "flockfab/flocking.hpp"
#include "flockfab/metrics.hpp"
#include "flockfab/run_result.hpp"
#include "flockfab/scenario.hpp"

namespace flockfab {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitScenario = 2, kExitAbort = 3 };

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kAlgorithmNames[] = {"baseline", "flocking"};

inline bool is_known_algorithm(std::string_view name) {
  for (const auto known : kAlgorithmNames) {
    if (known == name) return true;
  }
  return false;
}

/// N replications of one algorithm; replication r uses seed base_seed + r.
inline std::vector<RunResult> run_replications(const Scenario& scenario, std::string_view algorithm,
                                               std::size_t runs, std::uint64_t base_seed,
                                               std::size_t flsq_len = kDefaultFlsqLen,
                                               EngineOptions options = {}) {
  std::vector<RunResult> results;
  results.reserve(runs);
  for (std::size_t r = 0; r < runs; ++r) {
    const std::uint64_t seed = base_seed + r;
    if (algorithm == "baseline") {
      results.push_back(simulate(scenario, BaselinePolicy{}, seed, options));
    } else if (algorithm == "flocking") {
      results.push_back(simulate(scenario, FlockingPolicy{flsq_len}, seed, options));
    } else {
      throw std::invalid_argument("unknown algorithm '" + std::string(algorithm) + "'");
    }
  }
  return results;
}

struct RunRow {
  std::string algorithm;
  std::uint64_t seed = 0;
  MetricsSummary metrics;
};

struct AggregateRow {
  std::string algorithm;
  std::size_t runs = 0;
  MetricsSummary mean;
  MetricsSummary stddev;  // sample standard deviation, 0 for a single run
};

inline AggregateRow aggregate(std::string_view algorithm, const std::vector<MetricsSummary>& runs) {
  AggregateRow row;
  row.algorithm = std::string(algorithm);
  row.runs = runs.size();
  if (runs.empty()) return row;
  const double n = static_cast<double>(runs.size());
  auto field_stats = [&](double MetricsSummary::*field, double& mean, double& sd) {
    double sum = 0;
    for (const auto& m : runs) sum += m.*field;
    mean = sum / n;
    double sq = 0;
    for (const auto& m : runs) sq += (m.*field - mean) * (m.*field - mean);
    sd = runs.size() > 1 ? std::sqrt(sq / (n - 1)) : 0.0;
  };
  field_stats(&MetricsSummary::makespan, row.mean.makespan, row.stddev.makespan);
  field_stats(&MetricsSummary::flow_factor, row.mean.flow_factor, row.stddev.flow_factor);
  field_stats(&MetricsSummary::tardiness, row.mean.tardiness, row.stddev.tardiness);
  field_stats(&MetricsSummary::utilization, row.mean.utilization, row.stddev.utilization);
  return row;
}

/// Percentage change relative to the reference, (reference - other) / reference.
/// Applied to every metric alike, so a lower value shows as a positive change.
inline double percent_change(double reference, double other) {
  if (reference == 0) return 0.0;
  return (reference - other) / reference * 100.0;
}

// ---- CSV ------------------------------------------------------------------

/// Fixed-point with `places` decimals, '.' separator independent of locale.
inline std::string format_fixed(double value, int places = 10) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, places);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

inline std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

using CsvRow = std::vector<std::string>;

/// Header plus rows, LF line endings. Throws OutputError if the file cannot be written.
inline void emit_csv(const std::filesystem::path& path, const CsvRow& header, const std::vector<CsvRow>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot write '" + path.string() + "'");
  auto write_row = [&](const CsvRow& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << csv_field(row[i]);
    }
    out << '\n';
  };
  write_row(header);
  for (const auto& row : rows) write_row(row);
  out.flush();
  if (!out) throw OutputError("write to '" + path.string() + "' failed");
}

inline const CsvRow kRunsHeader = {"algorithm", "seed", "makespan_ticks", "flow_factor", "tardiness_ticks",
                                   "utilization"};

inline std::vector<CsvRow> runs_rows(const std::vector<RunRow>& runs) {
  std::vector<CsvRow> rows;
  for (const auto& r : runs) {
    rows.push_back({r.algorithm, std::to_string(r.seed),
                    std::to_string(static_cast<long long>(r.metrics.makespan)), format_fixed(r.metrics.flow_factor),
                    format_fixed(r.metrics.tardiness), format_fixed(r.metrics.utilization)});
  }
  return rows;
}

inline const CsvRow kAggregateHeader = {"algorithm",        "runs",           "makespan_mean",  "makespan_std",
                                        "flow_factor_mean", "flow_factor_std", "tardiness_mean", "tardiness_std",
                                        "utilization_mean", "utilization_std"};

inline std::vector<CsvRow> aggregate_rows(const std::vector<AggregateRow>& aggregates) {
  std::vector<CsvRow> rows;
  for (const auto& a : aggregates) {
    rows.push_back({a.algorithm, std::to_string(a.runs), format_fixed(a.mean.makespan),
                    format_fixed(a.stddev.makespan), format_fixed(a.mean.flow_factor),
                    format_fixed(a.stddev.flow_factor), format_fixed(a.mean.tardiness),
                    format_fixed(a.stddev.tardiness), format_fixed(a.mean.utilization),
                    format_fixed(a.stddev.utilization)});
  }
  return rows;
}

inline std::vector<CsvRow> histogram_rows(const std::vector<std::pair<Tick, std::size_t>>& bins) {
  std::vector<CsvRow> rows;
  for (const auto& [start, count] : bins) rows.push_back({std::to_string(start), std::to_string(count)});
  return rows;
}

struct MetricDef {
  std::string_view label;
  std::string_view key;
  double MetricsSummary::*field;
};

inline constexpr MetricDef kMetrics[] = {
    {"MS [ticks]", "makespan", &MetricsSummary::makespan},
    {"FF", "flow_factor", &MetricsSummary::flow_factor},
    {"TRD [ticks]", "tardiness", &MetricsSummary::tardiness},
    {"UTL", "utilization", &MetricsSummary::utilization},
};

/// One row per metric: each algorithm's mean, then percent change of every
/// further algorithm against the first.
inline std::pair<CsvRow, std::vector<CsvRow>> comparison_table(const std::vector<AggregateRow>& aggregates) {
  CsvRow header = {"metric"};
  for (const auto& a : aggregates) header.push_back(a.algorithm);
  for (std::size_t i = 1; i < aggregates.size(); ++i) header.push_back("change_pct_" + aggregates[i].algorithm);
  std::vector<CsvRow> rows;
  for (const auto& metric : kMetrics) {
    CsvRow row = {std::string(metric.key)};
    for (const auto& a : aggregates) row.push_back(format_fixed(a.mean.*metric.field));
    for (std::size_t i = 1; i < aggregates.size(); ++i) {
      row.push_back(format_fixed(percent_change(aggregates[0].mean.*metric.field, aggregates[i].mean.*metric.field), 4));
    }
    rows.push_back(std::move(row));
  }
  return {header, rows};
}

inline void print_comparison(std::ostream& out, const std::vector<AggregateRow>& aggregates) {
  out << std::left << std::setw(14) << "";
  for (const auto& a : aggregates) out << std::right << std::setw(12) << a.algorithm;
  if (aggregates.size() > 1) out << std::setw(12) << "Change";
  out << '\n';
  for (const auto& metric : kMetrics) {
    const bool percent = metric.key == "utilization";
    auto shown = [&](double v) { return format_fixed(percent ? v * 100.0 : v, 2); };
    out << std::left << std::setw(14) << (percent ? std::string("UTL [%]") : std::string(metric.label));
    for (const auto& a : aggregates) out << std::right << std::setw(12) << shown(a.mean.*metric.field);
    for (std::size_t i = 1; i < aggregates.size(); ++i) {
      out << std::right << std::setw(11)
          << format_fixed(percent_change(aggregates[0].mean.*metric.field, aggregates[i].mean.*metric.field), 2)
          << '%';
    }
    out << '\n';
  }
}

// ---- experiment -------------------------------------------------------------

struct ExperimentConfig {
  std::string scenario = "smallfab";  // path, or "smallfab" for the built-in scenario
  std::vector<std::string> algorithms = {"baseline", "flocking"};
  std::size_t runs = 50;
  std::uint64_t seed = 1;
  std::size_t flsq_len = kDefaultFlsqLen;
  Tick hist_bin = 10;
  std::filesystem::path out_dir = "results";
  Tick horizon_factor = 100;
};

struct ExperimentOutput {
  std::vector<RunRow> runs;
  std::vector<AggregateRow> aggregates;
  std::vector<std::vector<std::pair<Tick, std::size_t>>> histograms;  // per algorithm
};

inline Scenario resolve_scenario(const std::string& spec) {
  if (spec == "smallfab") return build_small_fab();
  return load_scenario_file(spec);
}

/// Runs every algorithm for `config.runs` replications without touching the filesystem.
inline ExperimentOutput compute_experiment(const Scenario& scenario, const ExperimentConfig& config) {
  ExperimentOutput output;
  const EngineOptions options{config.horizon_factor};
  for (const auto& algorithm : config.algorithms) {
    const auto results =
        run_replications(scenario, algorithm, config.runs, config.seed, config.flsq_len, options);
    std::vector<MetricsSummary> summaries;
    std::vector<std::pair<Tick, std::size_t>> pooled;
    for (const auto& r : results) {
      summaries.push_back(summarize(r));
      output.runs.push_back(RunRow{algorithm, r.seed, summaries.back()});
      merge_histogram(pooled, finish_histogram(r, config.hist_bin));
    }
    output.aggregates.push_back(aggregate(algorithm, summaries));
    output.histograms.push_back(std::move(pooled));
  }
  return output;
}

/// Writes runs.csv, aggregate.csv, comparison.csv and histogram_<alg>.csv into `dir`.
inline void write_experiment(const std::filesystem::path& dir, const ExperimentConfig& config,
                             const ExperimentOutput& output) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create output directory '" + dir.string() + "': " + ec.message());
  emit_csv(dir / "runs.csv", kRunsHeader, runs_rows(output.runs));
  emit_csv(dir / "aggregate.csv", kAggregateHeader, aggregate_rows(output.aggregates));
  const auto [header, rows] = comparison_table(output.aggregates);
  emit_csv(dir / "comparison.csv", header, rows);
  for (std::size_t i = 0; i < config.algorithms.size(); ++i) {
    emit_csv(dir / ("histogram_" + config.algorithms[i] + ".csv"), {"bin_start_ticks", "count"},
             histogram_rows(output.histograms[i]));
  }
}

/// Full experiment with diagnostics; returns a process exit code.
inline int run_experiment(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  if (config.runs < 1) {
    err << "error: --runs must be >= 1\n";
    return kExitUsage;
  }
  if (config.algorithms.empty()) {
    err << "error: at least one --algorithm is required\n";
    return kExitUsage;
  }
  for (const auto& a : config.algorithms) {
    if (!is_known_algorithm(a)) {
      err << "error: unknown algorithm '" << a << "'; valid names:";
      for (const auto known : kAlgorithmNames) err << ' ' << known;
      err << '\n';
      return kExitUsage;
    }
  }
  if (config.flsq_len < 1 || config.hist_bin < 1 || config.horizon_factor < 1) {
    err << "error: --flsq-len, --hist-bin and --horizon-factor must be >= 1\n";
    return kExitUsage;
  }

  Scenario scenario;
  try {
    scenario = resolve_scenario(config.scenario);
  } catch (const ConfigError& e) {
    err << "scenario error: " << e.what() << '\n';
    return kExitScenario;
  }

  ExperimentOutput output;
  try {
    output = compute_experiment(scenario, config);
  } catch (const SimulationAbort& e) {
    err << "simulation aborted: " << e.what() << '\n';
    return kExitAbort;
  }

  try {
    write_experiment(config.out_dir, config, output);
  } catch (const OutputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  out << "scenario " << scenario.name << ", " << scenario.total_lots() << " lots, " << config.runs
      << " runs per algorithm, seeds " << config.seed << ".." << config.seed + config.runs - 1 << "\n\n";
  print_comparison(out, output.aggregates);
  out << "\nresults written to " << config.out_dir.string() << '\n';
  return kExitOk;
}

}  // namespace flockfab
