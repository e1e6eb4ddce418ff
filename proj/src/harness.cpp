#include "hjb/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

namespace hjb {

RunMode parse_mode(std::string_view s) {
  if (s == "cweno") return RunMode::cweno;
  if (s == "cwenoz") return RunMode::cwenoz;
  if (s == "baseline") return RunMode::baseline;
  throw std::invalid_argument("unknown mode '" + std::string(s) + "'");
}

std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::cweno: return "cweno";
    case RunMode::cwenoz: return "cwenoz";
    case RunMode::baseline: return "baseline";
  }
  return "?";
}

ReconMode recon_mode(RunMode m) {
  switch (m) {
    case RunMode::cweno: return ReconMode::cweno;
    case RunMode::cwenoz: return ReconMode::cwenoz;
    case RunMode::baseline: return ReconMode::baseline_pointwise;
  }
  return ReconMode::cweno;
}

void RunConfig::validate(int dim) const {
  if (test < 1 || test > 5) throw std::invalid_argument("test must be in 1..5");
  if (n < 5) throw std::invalid_argument("n must be at least 5");
  if (dt_ratio && !(*dt_ratio > 0.0 && *dt_ratio <= 100.0))
    throw std::invalid_argument("dt ratio must be in (0, 100]");
  if (final_time && !(*final_time >= 0.0 && *final_time <= 1e3))
    throw std::invalid_argument("final time must be in [0, 1000]");
  if (threads < 1 || threads > 1024) throw std::invalid_argument("threads must be in 1..1024");
  march_options().recon.validate(dim);
}

MarchOptions RunConfig::march_options() const {
  MarchOptions opt;
  opt.recon.mode = recon_mode(mode);
  opt.recon.epsilon = epsilon;
  if (power) opt.recon.power = *power;
  opt.recon.substencil_weight = substencil_weight;
  opt.dt_ratio = dt_ratio;
  opt.final_time = final_time;
  opt.threads = threads;
  opt.keep_masks = keep_masks;
  return opt;
}

double l1_norm(std::span<const double> residuals, double cell_volume) {
  double s = 0.0;
  for (double r : residuals) s += std::abs(r);
  return cell_volume * s;
}

double l1_error(const Field& u, const ExactSolution& exact, double t) {
  std::vector<double> res(u.values.size());
  for (std::size_t k = 0; k < res.size(); ++k)
    res[k] = u.values[k] - exact.value(t, u.grid.node_point(k));
  double vol = u.grid.spacing(0);
  if (u.grid.dim() == 2) vol *= u.grid.spacing(1);
  return l1_norm(res, vol);
}

std::vector<double> convergence_order(std::span<const double> errors, std::span<const int> ns) {
  if (errors.size() != ns.size()) throw std::invalid_argument("errors and grid sizes differ");
  std::vector<double> out;
  for (std::size_t k = 1; k < errors.size(); ++k) {
    if (ns[k] <= ns[k - 1]) throw std::invalid_argument("grid sizes must increase");
    if (errors[k] == 0.0) {
      out.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    const double h0 = 1.0 / (ns[k - 1] - 1);
    const double h1 = 1.0 / (ns[k] - 1);
    out.push_back(std::log(errors[k - 1] / errors[k]) / std::log(h0 / h1));
  }
  return out;
}

TestRun run_test(const RunConfig& cfg) {
  TestProblem tp = make_test(cfg.test);
  cfg.validate(tp.spec.dim);
  Grid grid = tp.spec.make_grid(cfg.n);
  RunResult result = run(tp.spec, grid, cfg.march_options());

  MetricsRow m;
  m.test = cfg.test;
  m.mode = to_string(cfg.mode);
  m.n = cfg.n;
  const double t = result.final_field.time;
  m.l1_error = tp.exact && (t == 0.0 || t >= tp.exact->valid_from)
                   ? l1_error(result.final_field, *tp.exact, t)
                   : std::numeric_limits<double>::quiet_NaN();
  m.wall_seconds = result.wall_seconds;
  m.weight_computations = result.totals.weight_computations;
  m.reconstruction_evaluations = result.totals.reconstruction_evaluations;
  m.minimizer_evaluations = result.totals.minimizer_evaluations;
  m.min_value = *std::min_element(result.final_field.values.begin(),
                                  result.final_field.values.end());
  return TestRun{cfg, std::move(tp.spec), std::move(grid), std::move(result), m};
}

std::vector<GainRow> compute_gains(const std::vector<MetricsRow>& rows) {
  std::vector<GainRow> out;
  for (const auto& base : rows) {
    if (base.mode != "baseline") continue;
    for (const auto& r : rows) {
      if (r.test != base.test || r.n != base.n || r.mode == "baseline") continue;
      out.push_back({r.test, r.n, r.mode, 100.0 * (1.0 - r.wall_seconds / base.wall_seconds)});
    }
  }
  return out;
}

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

double parse_num(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::stod(s);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

constexpr const char* kMetricsHeader =
    "test,mode,n,l1_error,order,wall_seconds,weight_computations,reconstruction_evaluations,"
    "minimizer_evaluations,min_value";

}  // namespace

void write_metrics_csv(const std::filesystem::path& path, const std::vector<MetricsRow>& rows) {
  auto os = open_out(path);
  os << kMetricsHeader << "\n";
  for (const auto& r : rows) {
    os << r.test << ',' << r.mode << ',' << r.n << ',' << num(r.l1_error) << ','
       << (r.order ? num(*r.order) : "") << ',' << num(r.wall_seconds) << ','
       << r.weight_computations << ',' << r.reconstruction_evaluations << ','
       << r.minimizer_evaluations << ',' << num(r.min_value) << "\n";
  }
}

std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(is, line);
  if (line != kMetricsHeader) throw std::runtime_error("unexpected metrics header");
  std::vector<MetricsRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 10) throw std::runtime_error("malformed metrics row: " + line);
    MetricsRow r;
    r.test = std::stoi(f[0]);
    r.mode = f[1];
    r.n = std::stoi(f[2]);
    r.l1_error = parse_num(f[3]);
    if (!f[4].empty()) r.order = parse_num(f[4]);
    r.wall_seconds = parse_num(f[5]);
    r.weight_computations = std::stoll(f[6]);
    r.reconstruction_evaluations = std::stoll(f[7]);
    r.minimizer_evaluations = std::stoll(f[8]);
    r.min_value = parse_num(f[9]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_counts_csv(const std::filesystem::path& path, const Grid& grid,
                      const std::vector<std::int64_t>& per_cell) {
  auto os = open_out(path);
  os << "cell,i,j,x,y,reconstructions\n";
  for (std::size_t k = 0; k < per_cell.size(); ++k) {
    const Index2 c{static_cast<int>(k % grid.cells(0)), static_cast<int>(k / grid.cells(0))};
    const Point o = grid.cell_origin(c);
    os << k << ',' << c[0] << ',' << c[1] << ',' << num(o[0]) << ',' << num(o[1]) << ','
       << per_cell[k] << "\n";
  }
}

void write_reach_csv(const std::filesystem::path& path, const Grid& grid,
                     const std::vector<int>& first_inclusion) {
  auto os = open_out(path);
  os << "i,j,x,y,first_step\n";
  for (std::size_t k = 0; k < first_inclusion.size(); ++k) {
    const Index2 ij = grid.node_coords(k);
    const Point p = grid.node_point(k);
    os << ij[0] << ',' << ij[1] << ',' << num(p[0]) << ',' << num(p[1]) << ','
       << first_inclusion[k] << "\n";
  }
}

void write_gain_csv(const std::filesystem::path& path, const std::vector<GainRow>& gains) {
  auto os = open_out(path);
  os << "test,n,mode,gain_percent\n";
  for (const auto& g : gains) os << g.test << ',' << g.n << ',' << g.mode << ',' << num(g.gain_percent) << "\n";
}

SuiteResult run_suite(const std::vector<RunConfig>& configs, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw std::runtime_error("cannot create output directory " + out_dir.string());
  }
  SuiteResult sr;
  for (const auto& cfg : configs) {
    TestRun tr = run_test(cfg);
    const std::string tag = fmt::format("{}_{}", cfg.test, cfg.n);
    write_counts_csv(out_dir / ("counts_" + tag + ".csv"), tr.grid, tr.result.last_step.per_cell);
    if (!tr.result.first_inclusion.empty()) {
      write_reach_csv(out_dir / ("reach_" + tag + ".csv"), tr.grid, tr.result.first_inclusion);
    }
    sr.rows.push_back(tr.metrics);
  }

  std::map<std::pair<int, std::string>, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < sr.rows.size(); ++k) groups[{sr.rows[k].test, sr.rows[k].mode}].push_back(k);
  for (auto& [key, idx] : groups) {
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return sr.rows[a].n < sr.rows[b].n; });
    for (std::size_t k = 1; k < idx.size(); ++k) {
      const auto& prev = sr.rows[idx[k - 1]];
      auto& cur = sr.rows[idx[k]];
      if (prev.n == cur.n || std::isnan(prev.l1_error) || std::isnan(cur.l1_error)) continue;
      const double e[2] = {prev.l1_error, cur.l1_error};
      const int n[2] = {prev.n, cur.n};
      cur.order = convergence_order(e, n)[0];
    }
  }
  sr.gains = compute_gains(sr.rows);
  write_metrics_csv(out_dir / "errors.csv", sr.rows);
  write_gain_csv(out_dir / "gain.csv", sr.gains);
  return sr;
}

namespace {

template <class T>
std::vector<T> one_or_many(const nlohmann::json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

}  // namespace

SuiteFile parse_suite_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  SuiteFile sf;
  const nlohmann::json* runs = &doc;
  if (doc.is_object()) {
    sf.out_dir = doc.value("out_dir", std::string("results"));
    if (!doc.contains("runs")) throw std::invalid_argument("suite file needs a \"runs\" array");
    runs = &doc.at("runs");
  } else {
    sf.out_dir = "results";
  }
  if (!runs->is_array()) throw std::invalid_argument("\"runs\" must be an array");
  static const std::vector<std::string> known = {
      "test",    "n",     "mode",  "dt_ratio", "final_time", "epsilon",
      "power",   "substencil_weight", "out_dir", "keep_masks", "threads"};
  for (const auto& r : *runs) {
    for (auto it = r.begin(); it != r.end(); ++it) {
      if (std::find(known.begin(), known.end(), it.key()) == known.end())
        throw std::invalid_argument("unknown run key '" + it.key() + "'");
    }
    RunConfig base;
    base.test = r.at("test").get<int>();
    if (r.contains("dt_ratio")) base.dt_ratio = r["dt_ratio"].get<double>();
    if (r.contains("final_time")) base.final_time = r["final_time"].get<double>();
    if (r.contains("epsilon")) base.epsilon = r["epsilon"].get<double>();
    if (r.contains("power")) base.power = r["power"].get<double>();
    if (r.contains("substencil_weight")) base.substencil_weight = r["substencil_weight"].get<double>();
    if (r.contains("out_dir")) base.out_dir = r["out_dir"].get<std::string>();
    base.keep_masks = r.value("keep_masks", false);
    base.threads = r.value("threads", 1);
    const auto ns = one_or_many<int>(r.at("n"));
    const auto modes = r.contains("mode") ? one_or_many<std::string>(r["mode"])
                                          : std::vector<std::string>{"cweno"};
    for (const auto& mode : modes) {
      for (int n : ns) {
        RunConfig c = base;
        c.n = n;
        c.mode = parse_mode(mode);
        sf.runs.push_back(c);
      }
    }
  }
  return sf;
}

SuiteFile load_suite(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_suite_json(ss.str());
}

}  // namespace hjb
