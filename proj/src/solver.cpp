#include "hjb/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

namespace hjb {

StepContext StepContext::for_problem(const ProblemSpec& prob, double t_next, double dt,
                                     const ReconConfig& recon) {
  StepContext ctx;
  ctx.t_next = t_next;
  ctx.dt = dt;
  ctx.tableau = tableau_for(prob.scheme);
  ctx.rule = quadrature_for(prob.scheme);
  ctx.recon = recon;
  ctx.boundary = prob.boundary;
  return ctx;
}

void StepCounters::merge(const StepCounters& other) {
  weight_computations += other.weight_computations;
  reconstruction_evaluations += other.reconstruction_evaluations;
  minimizer_evaluations += other.minimizer_evaluations;
  clamped_feet += other.clamped_feet;
  if (per_cell.size() < other.per_cell.size()) per_cell.resize(other.per_cell.size(), 0);
  for (std::size_t k = 0; k < other.per_cell.size(); ++k) per_cell[k] += other.per_cell[k];
}

namespace {

// Runs body(begin, end, worker) over [0, count) split into contiguous chunks.
template <class Body>
void parallel_for(std::size_t count, int threads, Body&& body) {
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(count)));
  if (workers == 1) {
    body(std::size_t{0}, count, 0);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::size_t b = std::min(count, w * chunk);
    const std::size_t e = std::min(count, b + chunk);
    pool.emplace_back([&, b, e, w] {
      try {
        body(b, e, w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

double reconstruction_dx(const Grid& grid) {
  if (grid.dim() == 2 &&
      std::abs(grid.spacing(0) - grid.spacing(1)) > 1e-9 * grid.spacing(0)) {
    throw std::invalid_argument("2D reconstruction needs square cells");
  }
  return grid.spacing(0);
}

template <int Dim>
Field step_impl(const Field& u, const ProblemSpec& prob, const StepContext& ctx,
                StepCounters* counters) {
  const Grid& grid = u.grid;
  const double dx = reconstruction_dx(grid);
  const bool cached = ctx.recon.mode != ReconMode::baseline_pointwise;
  const int threads = std::max(1, ctx.threads);

  std::vector<ReconPolynomial<Dim>> cache;
  if (cached) {
    cache.resize(grid.cell_count());
    parallel_for(cache.size(), threads, [&](std::size_t b, std::size_t e, int) {
      for (std::size_t k = b; k < e; ++k) {
        const Index2 c{static_cast<int>(k % grid.cells(0)), static_cast<int>(k / grid.cells(0))};
        const Stencil s = stencil_values(grid, u.values, c, ctx.boundary);
        cache[k] = reconstruct_cell<Dim>(std::span<const double>(s.data(), ReconShape<Dim>::data),
                                         ctx.recon, dx);
      }
    });
  }

  std::vector<StepCounters> local(threads);
  for (auto& lc : local) lc.per_cell.assign(grid.cell_count(), 0);

  Field next{grid, std::vector<double>(u.values.size()), ctx.t_next};
  const int nu = prob.controls.kind == ControlKind::empty ? 0 : ctx.tableau.stages;

  parallel_for(grid.node_count(), threads, [&](std::size_t b, std::size_t e, int w) {
    StepCounters& cnt = local[w];
    for (std::size_t node = b; node < e; ++node) {
      const Point x = grid.node_point(node);
      const auto objective = [&](const ControlTuple& a) {
        const FootResult fr = trace_foot(ctx.tableau, prob.dynamics, x, ctx.t_next, ctx.dt, a);
        const ClampedFoot cf = clamp_foot(grid, ctx.boundary, fr.foot);
        if (cf.clamped) ++cnt.clamped_feet;
        const CellLocation loc = locate_cell(grid, cf.point);
        const std::size_t ci = grid.cell_index(loc.cell);
        ++cnt.per_cell[ci];
        ++cnt.reconstruction_evaluations;
        double value;
        if (cached) {
          value = evaluate(cache[ci], loc.local);
        } else {
          const Stencil s = stencil_values(grid, u.values, loc.cell, ctx.boundary);
          value = baseline_pointwise<Dim>(std::span<const double>(s.data(), ReconShape<Dim>::data),
                                          loc.local, ctx.recon, dx);
          ++cnt.weight_computations;
        }
        if (prob.running_cost) {
          value += cost_integral(ctx.rule, ctx.tableau, prob.running_cost, fr, a, ctx.t_next,
                                 ctx.dt);
        }
        return value;
      };
      const MinimizeResult mr = minimize(objective, prob.controls, nu, ctx.nm);
      cnt.minimizer_evaluations += mr.evaluations;
      next.values[node] = mr.value;
    }
  });

  if (counters) {
    StepCounters total;
    total.per_cell.assign(grid.cell_count(), 0);
    if (cached) total.weight_computations = static_cast<std::int64_t>(cache.size());
    for (const auto& lc : local) total.merge(lc);
    *counters = std::move(total);
  }
  return next;
}

}  // namespace

Field sl_step(const Field& u, const ProblemSpec& prob, const StepContext& ctx,
              StepCounters* counters) {
  if (!(ctx.dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (std::abs(u.time - (ctx.t_next - ctx.dt)) > 1e-9 * std::max(1.0, std::abs(ctx.t_next))) {
    throw std::invalid_argument("field time does not match the step start");
  }
  if (u.grid.dim() != prob.dim) throw std::invalid_argument("grid and problem dimension differ");
  ctx.recon.validate(prob.dim);
  return prob.dim == 1 ? step_impl<1>(u, prob, ctx, counters) : step_impl<2>(u, prob, ctx, counters);
}

Field apply_obstacle(const Field& u, const Field& g) {
  if (!u.grid.same_layout(g.grid)) throw std::invalid_argument("obstacle grid differs");
  Field out = u;
  for (std::size_t k = 0; k < out.values.size(); ++k)
    out.values[k] = std::max(out.values[k], g.values[k]);
  return out;
}

Mask reachable_union(const Mask& mask, const Field& u) {
  Mask out = mask.empty() ? Mask(u.values.size(), 0) : mask;
  if (out.size() != u.values.size()) throw std::invalid_argument("mask size differs from field");
  for (std::size_t k = 0; k < out.size(); ++k)
    if (u.values[k] <= 0.0) out[k] = 1;
  return out;
}

int step_count(double final_time, double dt) {
  if (final_time <= 0.0) return 0;
  const double ratio = final_time / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) return static_cast<int>(nearest);
  return static_cast<int>(std::ceil(ratio));
}

RunResult run(const ProblemSpec& prob, const Grid& grid, const MarchOptions& opt) {
  if (grid.dim() != prob.dim) throw std::invalid_argument("grid and problem dimension differ");
  opt.recon.validate(prob.dim);
  opt.nm.validate();
  const double ratio = opt.dt_ratio.value_or(prob.dt_ratio);
  const double final_time = opt.final_time.value_or(prob.final_time);
  if (!(ratio > 0.0)) throw std::invalid_argument("dt ratio must be positive");
  if (!(final_time >= 0.0)) throw std::invalid_argument("final time must be nonnegative");

  RunResult res;
  res.dt = ratio * grid.spacing(0);
  res.steps = step_count(final_time, res.dt);

  Field u = sample(grid, prob.initial);
  if (prob.boundary == BoundaryPolicy::periodic) {
    for (int a = 0; a < grid.dim(); ++a) {
      for (int j = 0; j < (grid.dim() == 2 ? grid.nodes(1 - a) : 1); ++j) {
        const std::size_t first = a == 0 ? grid.node_index(0, j) : grid.node_index(j, 0);
        const std::size_t last = a == 0 ? grid.node_index(grid.nodes(0) - 1, j)
                                        : grid.node_index(j, grid.nodes(1) - 1);
        if (std::abs(u.values[first] - u.values[last]) > 1e-10) {
          throw std::invalid_argument("initial data is not periodic on the grid");
        }
      }
    }
  }
  std::optional<Field> g;
  if (prob.obstacle) {
    g = sample(grid, prob.obstacle);
    u = apply_obstacle(u, *g);
  }
  res.initial = u;

  const bool track = opt.keep_masks || static_cast<bool>(prob.obstacle);
  Mask mask;
  if (track) {
    mask = reachable_union({}, u);
    res.masks.push_back(mask);
    res.first_inclusion.assign(mask.size(), -1);
    for (std::size_t k = 0; k < mask.size(); ++k)
      if (mask[k]) res.first_inclusion[k] = 0;
  }

  StepContext ctx = StepContext::for_problem(prob, 0.0, res.dt, opt.recon);
  ctx.nm = opt.nm;
  ctx.threads = opt.threads;

  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  for (int n = 0; n < res.steps; ++n) {
    const auto t0 = clock::now();
    const double t_next = n + 1 == res.steps ? final_time : (n + 1) * res.dt;
    ctx.t_next = t_next;
    ctx.dt = t_next - u.time;
    StepCounters sc;
    u = sl_step(u, prob, ctx, &sc);
    u.time = t_next;
    if (g) u = apply_obstacle(u, *g);
    if (track) {
      mask = reachable_union(mask, u);
      for (std::size_t k = 0; k < mask.size(); ++k)
        if (mask[k] && res.first_inclusion[k] < 0) res.first_inclusion[k] = n + 1;
      res.masks.push_back(mask);
    }
    res.weights_per_step.push_back(sc.weight_computations);
    res.totals.merge(sc);
    res.last_step = std::move(sc);
    res.step_seconds.push_back(std::chrono::duration<double>(clock::now() - t0).count());
  }
  res.wall_seconds = std::chrono::duration<double>(clock::now() - start).count();
  res.final_field = u;
  return res;
}

}  // namespace hjb
