#include "hjb/characteristics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hjb {

ButcherTableau ButcherTableau::euler() {
  ButcherTableau t;
  t.name = "euler";
  t.stages = 1;
  t.b[0] = 1.0;
  return t;
}

ButcherTableau ButcherTableau::heun() {
  ButcherTableau t;
  t.name = "heun";
  t.stages = 2;
  t.a[1][0] = 1.0;
  t.b = {0.5, 0.5};
  t.c = {0.0, 1.0};
  return t;
}

ButcherTableau ButcherTableau::rk3() {
  ButcherTableau t;
  t.name = "rk3";
  t.stages = 3;
  t.a[1][0] = 0.5;
  t.a[2][0] = -1.0;
  t.a[2][1] = 2.0;
  t.b = {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0};
  t.c = {0.0, 0.5, 1.0};
  return t;
}

void ButcherTableau::validate() const {
  if (stages < 1 || stages > kMaxStages) throw std::invalid_argument("bad stage count");
  double sum = 0.0;
  for (int k = 0; k < stages; ++k) {
    sum += b[k];
    for (int j = k; j < kMaxStages; ++j)
      if (a[k][j] != 0.0) throw std::invalid_argument("tableau is not explicit");
  }
  if (std::abs(sum - 1.0) > 1e-14) throw std::invalid_argument("tableau weights must sum to 1");
  if (c[0] != 0.0) throw std::invalid_argument("first abscissa must be 0");
}

QuadratureRule QuadratureRule::rectangle() {
  QuadratureRule q;
  q.kind = QuadratureKind::rectangle;
  q.points = 1;
  q.weights[0] = 1.0;
  return q;
}

QuadratureRule QuadratureRule::trapezoid() {
  QuadratureRule q;
  q.kind = QuadratureKind::trapezoid;
  q.points = 2;
  q.nodes = {0.0, 1.0};
  q.weights = {0.5, 0.5};
  return q;
}

QuadratureRule QuadratureRule::simpson() {
  QuadratureRule q;
  q.kind = QuadratureKind::simpson;
  q.points = 3;
  q.nodes = {0.0, 0.5, 1.0};
  q.weights = {1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0};
  return q;
}

ButcherTableau tableau_for(TimeScheme s) {
  switch (s) {
    case TimeScheme::euler_rectangle: return ButcherTableau::euler();
    case TimeScheme::heun_trapezoid: return ButcherTableau::heun();
    case TimeScheme::rk3_simpson: return ButcherTableau::rk3();
  }
  throw std::invalid_argument("unknown time scheme");
}

QuadratureRule quadrature_for(TimeScheme s) {
  switch (s) {
    case TimeScheme::euler_rectangle: return QuadratureRule::rectangle();
    case TimeScheme::heun_trapezoid: return QuadratureRule::trapezoid();
    case TimeScheme::rk3_simpson: return QuadratureRule::simpson();
  }
  throw std::invalid_argument("unknown time scheme");
}

std::string to_string(TimeScheme s) {
  switch (s) {
    case TimeScheme::euler_rectangle: return "euler+rectangle";
    case TimeScheme::heun_trapezoid: return "heun+trapezoid";
    case TimeScheme::rk3_simpson: return "rk3+simpson";
  }
  return "?";
}

FootResult trace_foot(const ButcherTableau& tab, const Dynamics& f_d, const Point& x,
                      double t_next, double dt, const ControlTuple& a) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (a.nu != 0 && a.nu != tab.stages) {
    throw std::invalid_argument("control tuple length does not match the tableau");
  }
  FootResult fr;
  fr.nu = tab.stages;
  for (int k = 0; k < tab.stages; ++k) {
    Point xk = x;
    for (int j = 0; j < k; ++j) {
      xk[0] += dt * tab.a[k][j] * fr.slopes[j][0];
      xk[1] += dt * tab.a[k][j] * fr.slopes[j][1];
    }
    const double tk = t_next - tab.c[k] * dt;
    const Point kk = f_d(tk, xk, a[k]);
    if (!std::isfinite(kk[0]) || !std::isfinite(kk[1])) {
      std::ostringstream os;
      os << "dynamics blew up at t=" << tk << ", x=(" << xk[0] << ", " << xk[1] << "), a=("
         << a[k][0] << ", " << a[k][1] << ")";
      throw std::runtime_error(os.str());
    }
    fr.stages[k] = xk;
    fr.slopes[k] = kk;
  }
  fr.foot = x;
  for (int k = 0; k < tab.stages; ++k) {
    fr.foot[0] += dt * tab.b[k] * fr.slopes[k][0];
    fr.foot[1] += dt * tab.b[k] * fr.slopes[k][1];
  }
  return fr;
}

double cost_integral(const QuadratureRule& rule, const ButcherTableau& tab, const RunningCost& f_c,
                     const FootResult& fr, const ControlTuple& a, double t_next, double dt) {
  if (rule.points != tab.stages || fr.nu != tab.stages) {
    throw std::invalid_argument("quadrature rule does not match the Runge-Kutta tableau");
  }
  for (int k = 0; k < rule.points; ++k) {
    if (rule.nodes[k] != tab.c[k]) {
      throw std::invalid_argument("quadrature nodes differ from the tableau abscissae");
    }
  }
  double sum = 0.0;
  for (int k = 0; k < rule.points; ++k) {
    sum += rule.weights[k] * f_c(t_next - rule.nodes[k] * dt, fr.stages[k], a[k]);
  }
  return dt * sum;
}

}  // namespace hjb
