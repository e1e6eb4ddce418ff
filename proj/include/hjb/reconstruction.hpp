#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hjb/grid.hpp"
#include "hjb/indicator_forms.hpp"

namespace hjb {

enum class ReconMode { cweno, cwenoz, baseline_pointwise };

/// Compile-time sizes of the reconstruction in each dimension.
template <int Dim>
struct ReconShape;

template <>
struct ReconShape<1> {
  static constexpr int coefficients = 4;
  static constexpr int data = 4;
  static constexpr int substencils = 2;  // L, R
};

template <>
struct ReconShape<2> {
  static constexpr int coefficients = 16;
  static constexpr int data = 16;
  static constexpr int substencils = 4;  // ne, nw, sw, se
};

/// Cubic (1D) or bicubic (2D) polynomial in local coordinates
/// x̂ = (x - x_j)/dx; coefficients follow coefficient_basis(Dim).
template <int Dim>
struct Polynomial {
  std::array<double, ReconShape<Dim>::coefficients> z{};
  double dx = 1.0;
};

using Polynomial1D = Polynomial<1>;
using Polynomial2D = Polynomial<2>;

/// Nonlinear blend of the candidates with its weights. Index 0 of weights
/// and indicators refers to the optimal polynomial (entering as P0).
template <int Dim>
struct ReconPolynomial {
  static constexpr int candidates = ReconShape<Dim>::substencils + 1;
  Polynomial<Dim> poly;
  std::array<double, candidates> weights{};
  std::array<double, candidates> indicators{};
  double tau = 0.0;
};

using ReconPolynomial1D = ReconPolynomial<1>;
using ReconPolynomial2D = ReconPolynomial<2>;

struct ReconConfig {
  ReconMode mode = ReconMode::cweno;
  /// Linear coefficient of each low-degree candidate; d0 = 1 - m*d.
  /// Defaults to 1/8 in 1D and 1/16 in 2D.
  std::optional<double> substencil_weight;
  double power = 2.0;
  /// Absolute epsilon; defaults to dx².
  std::optional<double> epsilon;

  /// d0 followed by the substencil coefficients (3 entries used in 1D, 5 in 2D).
  std::array<double, 5> linear_weights(int dim) const;
  double epsilon_for(double dx) const { return epsilon ? *epsilon : dx * dx; }
  /// Throws std::invalid_argument on coefficients outside their admissible range.
  void validate(int dim) const;
};

/// Upper bound on d = d_L = d_R in 1D for the contraction estimate to hold.
inline constexpr double kMaxSubstencilWeight1D = 0.332;

enum class Candidate1D { Q = 0, left = 1, right = 2 };
enum class Candidate2D { opt = 0, ne = 1, nw = 2, sw = 3, se = 4 };

/// Process-wide indicator forms (cell-side scaling) for a dimension.
const IndicatorForms& runtime_forms(int dim);

Polynomial1D fit_poly_1d(std::span<const double, 4> values, Candidate1D which, double dx = 1.0);
Polynomial2D fit_poly_2d(std::span<const double, 16> values, Candidate2D which, double dx = 1.0);

/// zᵀ M z / dx², with M the coefficient form of the runtime indicator.
double oscillation(const Polynomial1D& p);
double oscillation(const Polynomial2D& p);

/// Uᵀ A_k U / dx² for the candidate with index `which` (0 = optimal).
double oscillation_data(std::span<const double> values, int which, const IndicatorForms& forms,
                        double dx);

double tau_1d(double i_q, double i_l, double i_r);
double tau_2d(double i_opt, double i_ne, double i_se, double i_sw, double i_nw);

/// Blends candidates (optimal polynomial first) given their indicators.
template <int Dim>
ReconPolynomial<Dim> blend(std::span<const Polynomial<Dim>> candidates,
                           std::span<const double> indicators, const ReconConfig& cfg, double dx);

/// Blends candidates, computing each indicator from its coefficients.
template <int Dim>
ReconPolynomial<Dim> blend(std::span<const Polynomial<Dim>> candidates, const ReconConfig& cfg,
                           double dx);

/// Fits all candidates on a stencil, evaluates their indicators from the
/// data-space forms and blends them.
template <int Dim>
ReconPolynomial<Dim> reconstruct_cell(std::span<const double> values, const ReconConfig& cfg,
                                      double dx);

double evaluate(const Polynomial1D& p, double xhat);
double evaluate(const Polynomial2D& p, const Point& local);

inline double evaluate(const ReconPolynomial1D& rp, const Point& local) {
  return evaluate(rp.poly, local[0]);
}
inline double evaluate(const ReconPolynomial2D& rp, const Point& local) {
  return evaluate(rp.poly, local);
}

/// Reconstructs and evaluates at one point, recomputing indicators and
/// weights on every call. Bitwise equal to evaluate(reconstruct_cell(...)).
template <int Dim>
double baseline_pointwise(std::span<const double> values, const Point& local,
                          const ReconConfig& cfg, double dx);

}  // namespace hjb
