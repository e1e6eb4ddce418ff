#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hjb/problems.hpp"
#include "hjb/solver.hpp"

namespace hjb {

enum class RunMode { cweno, cwenoz, baseline };

RunMode parse_mode(std::string_view s);
std::string to_string(RunMode m);
ReconMode recon_mode(RunMode m);

struct RunConfig {
  int test = 1;
  int n = 81;
  RunMode mode = RunMode::cweno;
  std::optional<double> dt_ratio;
  std::optional<double> final_time;
  std::optional<double> epsilon;
  std::optional<double> power;
  std::optional<double> substencil_weight;
  std::filesystem::path out_dir;
  bool keep_masks = false;
  int threads = 1;

  /// Throws std::invalid_argument on out-of-range values.
  void validate(int dim) const;
  MarchOptions march_options() const;
};

struct MetricsRow {
  int test = 0;
  std::string mode;
  int n = 0;
  double l1_error = 0.0;
  std::optional<double> order;
  double wall_seconds = 0.0;
  std::int64_t weight_computations = 0;
  std::int64_t reconstruction_evaluations = 0;
  std::int64_t minimizer_evaluations = 0;
  double min_value = 0.0;

  bool operator==(const MetricsRow&) const = default;
};

struct TestRun {
  RunConfig config;
  ProblemSpec spec;
  Grid grid;
  RunResult result;
  MetricsRow metrics;  ///< l1_error is NaN when no exact solution exists
};

TestRun run_test(const RunConfig& cfg);

/// (∏dx) Σ|u_i - v(T, x_i)|.
double l1_error(const Field& u, const ExactSolution& exact, double t);
double l1_norm(std::span<const double> residuals, double cell_volume);

/// One order per refinement, log(e_{k-1}/e_k) / log(h_{k-1}/h_k) with
/// h = 1/(n-1); +inf when e_k = 0.
std::vector<double> convergence_order(std::span<const double> errors, std::span<const int> ns);

struct GainRow {
  int test = 0;
  int n = 0;
  std::string mode;
  double gain_percent = 0.0;
};

struct SuiteResult {
  std::vector<MetricsRow> rows;
  std::vector<GainRow> gains;
};

/// Runs every config, fills the order column per (test, mode) in increasing
/// n, and writes errors.csv, gain.csv, counts_<test>_<n>.csv and, for
/// constrained problems, reach_<test>_<n>.csv into out_dir.
SuiteResult run_suite(const std::vector<RunConfig>& configs, const std::filesystem::path& out_dir);

std::vector<GainRow> compute_gains(const std::vector<MetricsRow>& rows);

void write_metrics_csv(const std::filesystem::path& path, const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path);
void write_counts_csv(const std::filesystem::path& path, const Grid& grid,
                      const std::vector<std::int64_t>& per_cell);
void write_reach_csv(const std::filesystem::path& path, const Grid& grid,
                     const std::vector<int>& first_inclusion);
void write_gain_csv(const std::filesystem::path& path, const std::vector<GainRow>& gains);

/// Parses a suite file: {"out_dir": ..., "runs": [RunConfig...]}. In each
/// run, "n" and "mode" may also be arrays, expanded as a product.
struct SuiteFile {
  std::filesystem::path out_dir;
  std::vector<RunConfig> runs;
};
SuiteFile parse_suite_json(const std::string& text);
SuiteFile load_suite(const std::filesystem::path& path);

}  // namespace hjb
