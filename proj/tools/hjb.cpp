#include <cmath>
#include <exception>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "hjb/harness.hpp"
#include "hjb/indicator_forms.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Semi-Lagrangian HJB solver with CWENO reconstructions"};
  app.require_subcommand(1);

  hjb::RunConfig rc;
  std::string mode = "cweno";
  double dt_ratio = 0.0;
  bool seed_free = false;
  std::string out = "results";
  auto* run = app.add_subcommand("run", "run one benchmark");
  run->add_option("--test", rc.test, "benchmark 1..5")->required()->check(CLI::Range(1, 5));
  run->add_option("--n", rc.n, "nodes along x")->required()->check(CLI::Range(5, 100000));
  run->add_option("--mode", mode, "cweno, cwenoz or baseline")
      ->check(CLI::IsMember({"cweno", "cwenoz", "baseline"}));
  run->add_option("--dt-ratio", dt_ratio, "dt / dx (default per test)");
  run->add_option("--out", out, "output directory");
  run->add_option("--threads", rc.threads, "worker threads")->check(CLI::Range(1, 1024));
  run->add_flag("--seed-free", seed_free, "accepted for compatibility; runs are deterministic");

  std::string config;
  auto* suite = app.add_subcommand("suite", "run a JSON suite");
  suite->add_option("--config", config, "suite file")->required()->check(CLI::ExistingFile);

  bool dump = false;
  auto* forms = app.add_subcommand("forms", "indicator matrices");
  forms->add_flag("--dump", dump, "print every matrix as exact rationals");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      rc.mode = hjb::parse_mode(mode);
      if (dt_ratio > 0.0) rc.dt_ratio = dt_ratio;
      const auto sr = hjb::run_suite({rc}, out);
      const auto& r = sr.rows.front();
      fmt::print("test {} mode {} n {}: L1 error {:.3e}, min {:.3e}, {:.2f} s\n", r.test, r.mode,
                 r.n, r.l1_error, r.min_value, r.wall_seconds);
      fmt::print("weights {} evaluations {} minimizer calls {}\n", r.weight_computations,
                 r.reconstruction_evaluations, r.minimizer_evaluations);
    } else if (*suite) {
      const auto sf = hjb::load_suite(config);
      const auto sr = hjb::run_suite(sf.runs, sf.out_dir);
      fmt::print("{:>4} {:>8} {:>6} {:>12} {:>7} {:>9}\n", "test", "mode", "n", "L1 error", "order",
                 "seconds");
      for (const auto& r : sr.rows) {
        fmt::print("{:>4} {:>8} {:>6} {:>12.3e} {:>7} {:>9.2f}\n", r.test, r.mode, r.n,
                   r.l1_error, r.order ? fmt::format("{:.2f}", *r.order) : "", r.wall_seconds);
      }
      for (const auto& g : sr.gains)
        fmt::print("gain test {} n {} {}: {:.1f}%\n", g.test, g.n, g.mode, g.gain_percent);
      fmt::print("wrote {}\n", sf.out_dir.string());
    } else if (*forms) {
      if (!dump) {
        std::cout << forms->help();
        return 0;
      }
      for (int dim : {1, 2}) std::cout << hjb::format_forms(hjb::derive_indicator_forms(dim)) << "\n";
      std::cout << hjb::format_forms(
          hjb::derive_indicator_forms(2, hjb::CellDiameter::diagonal));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
