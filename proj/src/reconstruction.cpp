#include "hjb/reconstruction.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hjb {

namespace {

struct Entry {
  int row;
  int col;
  double value;
};

using Sparse = std::vector<Entry>;

Sparse sparse_from(const RationalMatrix& m) {
  Sparse s;
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      if (m(r, c) != 0) s.push_back({r, c, m(r, c).convert_to<double>()});
  return s;
}

// Floating-point copies of the runtime forms with zero entries dropped.
struct Tables {
  Sparse coefficient_form;
  std::vector<Sparse> interpolation;
  std::vector<Sparse> data_forms;
};

Tables build_tables(const IndicatorForms& forms) {
  Tables t;
  t.coefficient_form = sparse_from(forms.coefficient_form);
  for (const auto& m : forms.interpolation) t.interpolation.push_back(sparse_from(m));
  for (const auto& m : forms.data_forms) t.data_forms.push_back(sparse_from(m));
  return t;
}

const Tables& tables(int dim) {
  static const Tables one = build_tables(runtime_forms(1));
  static const Tables two = build_tables(runtime_forms(2));
  return dim == 1 ? one : two;
}

double quadratic_form(const Sparse& a, std::span<const double> v) {
  double s = 0.0;
  for (const Entry& e : a) s += e.value * v[e.row] * v[e.col];
  return s;
}

template <int Dim>
Polynomial<Dim> apply_interpolation(const Sparse& map, std::span<const double> values, double dx) {
  Polynomial<Dim> p;
  p.dx = dx;
  for (const Entry& e : map) p.z[e.row] += e.value * values[e.col];
  return p;
}

template <int Dim>
double coefficient_indicator(const Polynomial<Dim>& p) {
  return quadratic_form(tables(Dim).coefficient_form, p.z) / (p.dx * p.dx);
}

double raise(double base, double power) { return power == 2.0 ? base * base : std::pow(base, power); }

}  // namespace

std::array<double, 5> ReconConfig::linear_weights(int dim) const {
  const int m = dim == 1 ? ReconShape<1>::substencils : ReconShape<2>::substencils;
  const double d = substencil_weight ? *substencil_weight : (dim == 1 ? 1.0 / 8.0 : 1.0 / 16.0);
  std::array<double, 5> w{};
  w[0] = 1.0 - m * d;
  for (int k = 1; k <= m; ++k) w[k] = d;
  return w;
}

void ReconConfig::validate(int dim) const {
  const auto w = linear_weights(dim);
  const int used = dim == 1 ? 3 : 5;
  for (int k = 0; k < used; ++k) {
    if (!(w[k] > 0.0)) throw std::invalid_argument("linear coefficients must be strictly positive");
  }
  if (dim == 1 && w[1] > kMaxSubstencilWeight1D) {
    throw std::invalid_argument("substencil coefficient " + std::to_string(w[1]) +
                                " exceeds the 1D contraction bound 0.332");
  }
  if (!(power >= 1.0)) throw std::invalid_argument("weight exponent must be >= 1");
  if (epsilon && !(*epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
}

const IndicatorForms& runtime_forms(int dim) {
  static const IndicatorForms one = derive_indicator_forms(1, CellDiameter::side);
  static const IndicatorForms two = derive_indicator_forms(2, CellDiameter::side);
  if (dim == 1) return one;
  if (dim == 2) return two;
  throw std::invalid_argument("dimension must be 1 or 2");
}

Polynomial1D fit_poly_1d(std::span<const double, 4> values, Candidate1D which, double dx) {
  return apply_interpolation<1>(tables(1).interpolation[static_cast<int>(which)], values, dx);
}

Polynomial2D fit_poly_2d(std::span<const double, 16> values, Candidate2D which, double dx) {
  return apply_interpolation<2>(tables(2).interpolation[static_cast<int>(which)], values, dx);
}

double oscillation(const Polynomial1D& p) { return coefficient_indicator(p); }
double oscillation(const Polynomial2D& p) { return coefficient_indicator(p); }

double oscillation_data(std::span<const double> values, int which, const IndicatorForms& forms,
                        double dx) {
  if (static_cast<int>(values.size()) < forms.data_count()) {
    throw std::invalid_argument("stencil has too few values");
  }
  if (&forms == &runtime_forms(forms.dim)) {
    return quadratic_form(tables(forms.dim).data_forms[which], values) / (dx * dx);
  }
  return quadratic_form(sparse_from(forms.data_forms[which]), values) / (dx * dx);
}

double tau_1d(double i_q, double i_l, double i_r) { return std::abs(2.0 * i_q - i_l - i_r); }

double tau_2d(double i_opt, double i_ne, double i_se, double i_sw, double i_nw) {
  return std::abs(4.0 * i_opt - i_ne - i_se - i_sw - i_nw);
}

template <int Dim>
ReconPolynomial<Dim> blend(std::span<const Polynomial<Dim>> candidates,
                           std::span<const double> indicators, const ReconConfig& cfg, double dx) {
  constexpr int kCand = ReconPolynomial<Dim>::candidates;
  constexpr int kCoef = ReconShape<Dim>::coefficients;
  if (static_cast<int>(candidates.size()) != kCand ||
      static_cast<int>(indicators.size()) != kCand) {
    throw std::invalid_argument("wrong number of candidate polynomials");
  }
  const auto d = cfg.linear_weights(Dim);
  const double eps = cfg.epsilon_for(dx);

  ReconPolynomial<Dim> rp;
  rp.poly.dx = dx;
  for (int k = 0; k < kCand; ++k) rp.indicators[k] = indicators[k];
  if (cfg.mode == ReconMode::cwenoz) {
    rp.tau = Dim == 1 ? tau_1d(indicators[0], indicators[1], indicators[2])
                      : tau_2d(indicators[0], indicators[1], indicators[4], indicators[3],
                               indicators[2]);
  }

  std::array<double, kCand> alpha{};
  double total = 0.0;
  for (int k = 0; k < kCand; ++k) {
    const double denom = indicators[k] + eps;
    alpha[k] = cfg.mode == ReconMode::cwenoz ? d[k] * (1.0 + raise(rp.tau / denom, cfg.power))
                                             : d[k] / raise(denom, cfg.power);
    total += alpha[k];
  }
  for (int k = 0; k < kCand; ++k) rp.weights[k] = alpha[k] / total;

  // P0 = (P_opt - Σ d_k P_k) / d0 enters under ω0.
  for (int i = 0; i < kCoef; ++i) {
    double p0 = candidates[0].z[i];
    for (int k = 1; k < kCand; ++k) p0 -= d[k] * candidates[k].z[i];
    p0 /= d[0];
    double zi = rp.weights[0] * p0;
    for (int k = 1; k < kCand; ++k) zi += rp.weights[k] * candidates[k].z[i];
    rp.poly.z[i] = zi;
  }
  return rp;
}

template <int Dim>
ReconPolynomial<Dim> blend(std::span<const Polynomial<Dim>> candidates, const ReconConfig& cfg,
                           double dx) {
  std::array<double, ReconPolynomial<Dim>::candidates> ind{};
  for (std::size_t k = 0; k < ind.size() && k < candidates.size(); ++k) {
    Polynomial<Dim> scaled = candidates[k];
    scaled.dx = dx;
    ind[k] = oscillation(scaled);
  }
  return blend<Dim>(candidates, ind, cfg, dx);
}

template <int Dim>
ReconPolynomial<Dim> reconstruct_cell(std::span<const double> values, const ReconConfig& cfg,
                                      double dx) {
  constexpr int kCand = ReconPolynomial<Dim>::candidates;
  const Tables& t = tables(Dim);
  std::array<Polynomial<Dim>, kCand> cands;
  std::array<double, kCand> ind{};
  for (int k = 0; k < kCand; ++k) {
    cands[k] = apply_interpolation<Dim>(t.interpolation[k], values, dx);
    ind[k] = quadratic_form(t.data_forms[k], values) / (dx * dx);
  }
  return blend<Dim>(std::span<const Polynomial<Dim>>(cands), std::span<const double>(ind), cfg,
                    dx);
}

double evaluate(const Polynomial1D& p, double xhat) {
  return ((p.z[3] * xhat + p.z[2]) * xhat + p.z[1]) * xhat + p.z[0];
}

double evaluate(const Polynomial2D& p, const Point& local) {
  // Regroup B₃ coefficients as c[py][px] and evaluate by nested Horner.
  const auto& z = p.z;
  const double x = local[0];
  const double y = local[1];
  const double r0 = ((z[6] * x + z[3]) * x + z[1]) * x + z[0];
  const double r1 = ((z[10] * x + z[7]) * x + z[4]) * x + z[2];
  const double r2 = ((z[13] * x + z[11]) * x + z[8]) * x + z[5];
  const double r3 = ((z[15] * x + z[14]) * x + z[12]) * x + z[9];
  return ((r3 * y + r2) * y + r1) * y + r0;
}

template <int Dim>
double baseline_pointwise(std::span<const double> values, const Point& local,
                          const ReconConfig& cfg, double dx) {
  ReconConfig as_cweno = cfg;
  if (as_cweno.mode == ReconMode::baseline_pointwise) as_cweno.mode = ReconMode::cweno;
  return evaluate(reconstruct_cell<Dim>(values, as_cweno, dx), local);
}

template ReconPolynomial<1> blend<1>(std::span<const Polynomial<1>>, std::span<const double>,
                                     const ReconConfig&, double);
template ReconPolynomial<2> blend<2>(std::span<const Polynomial<2>>, std::span<const double>,
                                     const ReconConfig&, double);
template ReconPolynomial<1> blend<1>(std::span<const Polynomial<1>>, const ReconConfig&, double);
template ReconPolynomial<2> blend<2>(std::span<const Polynomial<2>>, const ReconConfig&, double);
template ReconPolynomial<1> reconstruct_cell<1>(std::span<const double>, const ReconConfig&,
                                                double);
template ReconPolynomial<2> reconstruct_cell<2>(std::span<const double>, const ReconConfig&,
                                                double);
template double baseline_pointwise<1>(std::span<const double>, const Point&, const ReconConfig&,
                                      double);
template double baseline_pointwise<2>(std::span<const double>, const Point&, const ReconConfig&,
                                      double);

}  // namespace hjb
