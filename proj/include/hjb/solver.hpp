#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hjb/characteristics.hpp"
#include "hjb/control.hpp"
#include "hjb/grid.hpp"
#include "hjb/problems.hpp"
#include "hjb/reconstruction.hpp"

namespace hjb {

struct StepContext {
  double t_next = 0.0;
  double dt = 0.0;
  ButcherTableau tableau = ButcherTableau::euler();
  QuadratureRule rule = QuadratureRule::rectangle();
  ReconConfig recon;
  BoundaryPolicy boundary = BoundaryPolicy::extrapolate;
  NMParams nm;
  int threads = 1;

  static StepContext for_problem(const ProblemSpec& prob, double t_next, double dt,
                                 const ReconConfig& recon = {});
};

struct StepCounters {
  std::int64_t weight_computations = 0;
  std::int64_t reconstruction_evaluations = 0;
  std::int64_t minimizer_evaluations = 0;
  std::int64_t clamped_feet = 0;
  std::vector<std::int64_t> per_cell;  ///< reconstruction evaluations per cell

  void merge(const StepCounters& other);
};

/// One semi-Lagrangian step from u.time to ctx.t_next. Cached modes build
/// every cell polynomial once per step; the pointwise baseline rebuilds it
/// at every evaluation.
Field sl_step(const Field& u, const ProblemSpec& prob, const StepContext& ctx,
              StepCounters* counters = nullptr);

/// Componentwise max(u, g).
Field apply_obstacle(const Field& u, const Field& g);

using Mask = std::vector<std::uint8_t>;

/// Running OR: mask_i | (u_i <= 0). An empty mask starts a new union.
Mask reachable_union(const Mask& mask, const Field& u);

struct MarchOptions {
  ReconConfig recon;
  NMParams nm;
  std::optional<double> dt_ratio;
  std::optional<double> final_time;
  int threads = 1;
  bool keep_masks = false;
};

struct RunResult {
  Field initial;
  Field final_field;
  double dt = 0.0;
  int steps = 0;
  std::vector<Mask> masks;            ///< R^0 .. R^N when keep_masks or obstacle present
  std::vector<int> first_inclusion;   ///< -1 if never reached
  StepCounters totals;                ///< summed over all steps
  StepCounters last_step;
  std::vector<std::int64_t> weights_per_step;
  std::vector<double> step_seconds;
  double wall_seconds = 0.0;          ///< marching loop only
};

RunResult run(const ProblemSpec& prob, const Grid& grid, const MarchOptions& opt = {});

/// Number of steps for horizon T at step dt, the last one possibly shorter.
int step_count(double final_time, double dt);

}  // namespace hjb
