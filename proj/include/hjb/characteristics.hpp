#pragma once

#include <array>
#include <functional>
#include <string>

#include "hjb/grid.hpp"

namespace hjb {

/// One control value (up to two components) and the per-stage tuple.
using Control = std::array<double, 2>;

inline constexpr int kMaxStages = 4;

struct ControlTuple {
  std::array<Control, kMaxStages> a{};
  int nu = 0;  ///< 0 for an empty control set

  const Control& operator[](int k) const { return nu == 0 ? a[0] : a[k]; }
};

using Dynamics = std::function<Point(double t, const Point& x, const Control& a)>;
using RunningCost = std::function<double(double t, const Point& x, const Control& a)>;

/// Explicit Runge-Kutta tableau with up to kMaxStages stages.
struct ButcherTableau {
  std::string name;
  int stages = 1;
  std::array<std::array<double, kMaxStages>, kMaxStages> a{};
  std::array<double, kMaxStages> b{};
  std::array<double, kMaxStages> c{};

  static ButcherTableau euler();
  static ButcherTableau heun();
  static ButcherTableau rk3();

  /// Throws std::invalid_argument unless explicit, Σb = 1 and c₁ = 0.
  void validate() const;
};

enum class QuadratureKind { rectangle, trapezoid, simpson };

struct QuadratureRule {
  QuadratureKind kind = QuadratureKind::rectangle;
  int points = 1;
  std::array<double, kMaxStages> nodes{};
  std::array<double, kMaxStages> weights{};

  static QuadratureRule rectangle();
  static QuadratureRule trapezoid();
  static QuadratureRule simpson();
};

/// Matching tableau/rule pairs.
enum class TimeScheme { euler_rectangle, heun_trapezoid, rk3_simpson };

ButcherTableau tableau_for(TimeScheme s);
QuadratureRule quadrature_for(TimeScheme s);
std::string to_string(TimeScheme s);

struct FootResult {
  Point foot{};
  std::array<Point, kMaxStages> stages{};
  std::array<Point, kMaxStages> slopes{};
  int nu = 0;
};

/// Traces the characteristic backward from x over [t_next - dt, t_next].
/// Stage k uses time t_next - c_k dt. Throws std::runtime_error
/// ("dynamics blew up ...") on a non-finite slope.
FootResult trace_foot(const ButcherTableau& tab, const Dynamics& f_d, const Point& x,
                      double t_next, double dt, const ControlTuple& a);

/// Quadrature of the running cost along the traced stages; node k is at
/// time t_next - ξ_k dt and point X_k. Throws std::invalid_argument if the
/// rule does not match the tableau.
double cost_integral(const QuadratureRule& rule, const ButcherTableau& tab, const RunningCost& f_c,
                     const FootResult& fr, const ControlTuple& a, double t_next, double dt);

}  // namespace hjb
