#include "hjb/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hjb {

namespace {

constexpr double kPi = std::numbers::pi;

double test2_initial(double x) { return std::min(-std::cos(kPi * x / 2.0), 0.0); }

// Right-hand side of the fixed-point relation a = g(t, x, a).
double test2_map(double t, double x, double a) {
  if (a > kPi / 2.0) return kPi / 2.0;
  if (a < -kPi / 2.0) return -kPi / 2.0;
  const double s = std::clamp(2.0 * a / kPi, -1.0, 1.0);
  return x / t - 2.0 / (kPi * t) * std::asin(s);
}

}  // namespace

Grid ProblemSpec::make_grid(int n) const {
  if (dim == 1) return Grid::line(lo[0], hi[0], n);
  const double dx = (hi[0] - lo[0]) / (n - 1);
  const int ny = static_cast<int>(std::lround((hi[1] - lo[1]) / dx)) + 1;
  return Grid::rectangle(lo, hi, n, ny);
}

double test1_bump(const Point& x) {
  constexpr double M = 0.15;
  constexpr double R = 0.15;
  const double r = std::hypot(x[0] - 0.3, x[1] - 0.7);
  if (r >= R) return 0.0;
  const double s = r / R;
  const double q = s - 1.0;
  return M * (1.0 + s * s * s * (-1.0 + 3.0 * q * (1.0 - 2.0 * q)));
}

double test5_target(const Point& x) {
  constexpr double C = 20.0;
  constexpr double r = 0.25;
  return C * std::min(std::hypot(x[0] - 1.0, x[1]) - r, r);
}

double test5_obstacle(const Point& x) {
  constexpr double C = 20.0;
  constexpr double gamma = 0.2;
  const double first = C * (gamma - std::max(std::abs(x[0] - 0.3), std::abs(x[1] - 0.4)));
  const double second = C * (gamma - std::max(std::abs(x[0] + 1.0), std::abs(x[1] + 1.5)));
  return std::max({-gamma, first, second});
}

Test2Solution solve_test2(double t, double x, double tol) {
  if (!(t > 0.0)) throw std::invalid_argument("Test 2 exact solution needs t > 0");
  const double half = kPi / 2.0;
  const auto residual = [&](double a) { return a - test2_map(t, x, a); };

  Test2Solution out;
  // a - g(a) is strictly increasing on [-π/2, π/2]; outside the bracket the
  // control saturates.
  if (residual(-half) > 0.0) {
    out.control = -half;
  } else if (residual(half) < 0.0) {
    out.control = half;
  } else {
    double a = std::clamp(0.5 * x * x * t, -half, half);
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
      const double next = std::clamp(0.5 * a + 0.5 * test2_map(t, x, a), -half, half);
      ++out.iterations;
      if (std::abs(next - a) <= tol) {
        a = next;
        converged = std::abs(residual(a)) <= 10.0 * tol / std::min(t, 1.0);
        break;
      }
      a = next;
    }
    if (!converged) {
      double lo = -half;
      double hi = half;
      for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (residual(mid) > 0.0) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      a = 0.5 * (lo + hi);
      out.bisected = true;
    }
    out.control = a;
  }
  const double a = out.control;
  out.value = std::min(0.0, 0.5 * t * a * a + test2_initial(x - t * a));
  return out;
}

double exact_test2(double t, double x, double tol) { return solve_test2(t, x, tol).value; }

TestProblem make_test(int k) {
  TestProblem tp;
  ProblemSpec& p = tp.spec;
  p.id = k;
  switch (k) {
    case 1: {
      p.name = "passive advection";
      p.dim = 2;
      p.lo = {0.0, 0.0};
      p.hi = {1.0, 1.0};
      p.dynamics = [](double, const Point& x, const Control&) {
        return Point{-2.0 * kPi * (x[1] - 0.5), 2.0 * kPi * (x[0] - 0.5)};
      };
      p.controls = ControlSet::empty();
      p.initial = test1_bump;
      p.boundary = BoundaryPolicy::extrapolate;
      p.scheme = TimeScheme::rk3_simpson;
      p.dt_ratio = 3.0;
      p.final_time = 1.0;
      tp.exact = ExactSolution{
          [](double t, const Point& x) {
            const double th = 2.0 * kPi * t;
            const double dx = x[0] - 0.5;
            const double dy = x[1] - 0.5;
            return test1_bump({0.5 + std::cos(th) * dx - std::sin(th) * dy,
                               0.5 + std::sin(th) * dx + std::cos(th) * dy});
          },
          0.0, "rigid rotation with period 1"};
      break;
    }
    case 2: {
      p.name = "1D eikonal, nonsmooth data";
      p.dim = 1;
      p.lo = {-2.0, 0.0};
      p.hi = {2.0, 0.0};
      p.dynamics = [](double, const Point&, const Control& a) { return Point{-a[0], 0.0}; };
      p.running_cost = [](double, const Point&, const Control& a) { return 0.5 * a[0] * a[0]; };
      p.controls = ControlSet::box(-2.0, 2.0, 1);
      p.initial = [](const Point& x) { return test2_initial(x[0]); };
      p.boundary = BoundaryPolicy::extrapolate;
      p.scheme = TimeScheme::euler_rectangle;
      p.dt_ratio = 10.0;
      p.final_time = 1.0;
      tp.exact = ExactSolution{[](double t, const Point& x) {
                                 return t == 0.0 ? test2_initial(x[0]) : exact_test2(t, x[0]);
                               },
                               0.0, "Hopf-Lax via the optimal-control fixed point"};
      break;
    }
    case 3: {
      p.name = "1D eikonal with source";
      p.dim = 1;
      p.lo = {0.0, 0.0};
      p.hi = {2.0 * kPi, 0.0};
      p.dynamics = [](double, const Point&, const Control& a) { return Point{-a[0], 0.0}; };
      p.running_cost = [](double t, const Point& x, const Control& a) {
        const double c = std::cos(x[0]);
        return 0.5 * a[0] * a[0] - std::sin(x[0]) + (9.0 / 8.0 + (t * t - 3.0 * t) / 2.0) * c * c;
      };
      p.controls = ControlSet::box(-2.0, 2.0, 1);
      p.initial = [](const Point& x) { return 1.5 * std::sin(x[0]); };
      p.boundary = BoundaryPolicy::periodic;
      p.scheme = TimeScheme::rk3_simpson;
      p.dt_ratio = 1.0;
      p.final_time = 0.5;
      tp.exact = ExactSolution{
          [](double t, const Point& x) { return (1.5 - t) * std::sin(x[0]); }, 0.0,
          "(3/2 - t) sin x"};
      break;
    }
    case 4: {
      p.name = "2D eikonal, concave data";
      p.dim = 2;
      p.lo = {-2.0, -2.0};
      p.hi = {2.0, 2.0};
      p.dynamics = [](double, const Point&, const Control& a) { return Point{-a[0], -a[1]}; };
      p.running_cost = [](double, const Point&, const Control& a) {
        return 0.5 * (a[0] * a[0] + a[1] * a[1]);
      };
      p.controls = ControlSet::box(-2.0, 2.0, 2);
      p.initial = [](const Point& x) { return std::max(1.0 - x[0] * x[0] - x[1] * x[1], 0.0); };
      p.boundary = BoundaryPolicy::extrapolate;
      p.scheme = TimeScheme::euler_rectangle;
      p.dt_ratio = 1.25;
      p.final_time = 0.5;
      tp.exact = ExactSolution{
          [](double t, const Point& x) {
            const double r = std::hypot(x[0], x[1]);
            if (t == 0.0) return std::max(1.0 - r * r, 0.0);
            return r <= 1.0 ? (r - 1.0) * (r - 1.0) / (2.0 * t) : 0.0;
          },
          0.5, "valid for t >= 1/2"};
      break;
    }
    case 5: {
      p.name = "Zermelo navigation with obstacles";
      p.dim = 2;
      p.lo = {-3.0, -2.0};
      p.hi = {2.0, 2.0};
      p.dynamics = [](double, const Point& x, const Control& a) {
        return Point{2.0 - 0.5 * x[1] * x[1] + a[0], a[1]};
      };
      p.controls = ControlSet::circle(1.0);
      p.initial = test5_target;
      p.obstacle = test5_obstacle;
      p.boundary = BoundaryPolicy::extrapolate;
      p.scheme = TimeScheme::rk3_simpson;
      p.dt_ratio = 1.0;
      p.final_time = 3.0;
      break;
    }
    default:
      throw std::invalid_argument("unknown test " + std::to_string(k) + " (expected 1..5)");
  }
  return tp;
}

}  // namespace hjb
