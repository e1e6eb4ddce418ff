#pragma once

#include <functional>
#include <optional>
#include <string>

#include "hjb/characteristics.hpp"
#include "hjb/control.hpp"
#include "hjb/grid.hpp"

namespace hjb {

using ScalarField = std::function<double(const Point&)>;

struct ProblemSpec {
  int id = 0;
  std::string name;
  int dim = 1;
  Point lo{};
  Point hi{};
  Dynamics dynamics;
  RunningCost running_cost;  ///< empty means zero cost
  ControlSet controls;
  ScalarField initial;
  ScalarField obstacle;  ///< empty when unconstrained
  BoundaryPolicy boundary = BoundaryPolicy::extrapolate;
  TimeScheme scheme = TimeScheme::euler_rectangle;
  double dt_ratio = 1.0;  ///< dt = dt_ratio * dx
  double final_time = 1.0;

  /// Grid with n nodes along x; in 2D the y count follows from the aspect
  /// ratio so cells are square.
  Grid make_grid(int n) const;
};

struct ExactSolution {
  std::function<double(double t, const Point& x)> value;
  double valid_from = 0.0;  ///< formula holds for t >= valid_from (and t = 0)
  std::string note;
};

struct TestProblem {
  ProblemSpec spec;
  std::optional<ExactSolution> exact;
};

/// Benchmarks 1..5; throws std::invalid_argument otherwise.
TestProblem make_test(int k);

/// Test 1 initial bump.
double test1_bump(const Point& x);

/// Test 5 target and obstacle level-set functions.
double test5_target(const Point& x);
double test5_obstacle(const Point& x);

struct Test2Solution {
  double control = 0.0;  ///< optimal a*
  double value = 0.0;
  int iterations = 0;
  bool bisected = false;
};

/// Exact Test 2 solution from the fixed point of the optimal-control
/// relation; t > 0.
Test2Solution solve_test2(double t, double x, double tol = 1e-14);
double exact_test2(double t, double x, double tol = 1e-14);

}  // namespace hjb
