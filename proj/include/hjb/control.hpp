#pragma once

#include <functional>
#include <vector>

#include "hjb/characteristics.hpp"

namespace hjb {

enum class ControlKind { empty, box, circle };

struct ControlSet {
  ControlKind kind = ControlKind::empty;
  int components = 0;  ///< 1 or 2 for a box, 2 for a circle
  Control lo{};
  Control hi{};
  double radius = 0.0;

  static ControlSet empty();
  static ControlSet box(double lo, double hi, int components = 1);
  static ControlSet circle(double radius);

  /// Search dimensions per stage: box components, one angle for a circle.
  int param_dim() const;
  bool contains(const Control& a, double tol = 1e-12) const;
};

struct NMParams {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  int max_iter = 200;
  double ftol = 1e-9;
  int coarse_pts = 9;

  void validate() const;
};

/// Maps search parameters (nu * param_dim of them) to a feasible tuple.
ControlTuple embed(const ControlSet& set, const std::vector<double>& params, int nu);

using Objective = std::function<double(const ControlTuple&)>;

struct MinimizeResult {
  ControlTuple controls;
  double value = 0.0;
  long evaluations = 0;
};

/// Coarse tabulation followed by Nelder-Mead in parameter space, every
/// vertex passed through embed. Throws std::runtime_error on a non-finite
/// objective value.
MinimizeResult minimize(const Objective& objective, const ControlSet& set, int nu,
                        const NMParams& p = {});

}  // namespace hjb
