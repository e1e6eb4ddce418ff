#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace hjb {

using Rational = boost::multiprecision::cpp_rational;

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& operator()(int r, int c) { return data_[r * cols_ + c]; }
  const Rational& operator()(int r, int c) const { return data_[r * cols_ + c]; }

  RationalMatrix transpose() const;
  bool is_symmetric() const;
  std::vector<double> to_double() const;  ///< row-major

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> data_;
};

/// Inverse by Gauss-Jordan elimination; throws std::domain_error if singular.
RationalMatrix inverse(const RationalMatrix& m);

/// Exponents of one basis monomial x̂^px ŷ^py.
struct Monomial {
  int px = 0;
  int py = 0;
};

/// Cubic basis {1, x̂, x̂², x̂³} in 1D; bicubic basis in the fixed order
/// 1, x̂, ŷ, x̂², x̂ŷ, ŷ², x̂³, x̂²ŷ, x̂ŷ², ŷ³, x̂³ŷ, x̂²ŷ², x̂ŷ³, x̂³ŷ², x̂²ŷ³, x̂³ŷ³ in 2D.
const std::vector<Monomial>& coefficient_basis(int dim);

/// Length scale used in the derivative weights of the 2D indicator: the
/// cell side or the cell diagonal. Only matters for third and higher
/// derivatives; 1D ignores it.
enum class CellDiameter { side, diagonal };

/// Oscillation indicators as quadratic forms, all entries exact.
///
/// For a polynomial with coefficient vector z on a cell of size dx,
/// I[P] = zᵀ M z / dx². Each candidate k (optimal first, then the low-degree
/// substencils: L, R in 1D; ne, nw, sw, se in 2D) also has an interpolation
/// map C_k from the stencil data U (4 or 16 values) to z, zero-padded, and
/// the data-space matrix A_k = C_kᵀ M C_k so that I[P_k] = Uᵀ A_k U / dx².
struct IndicatorForms {
  int dim = 1;
  CellDiameter diameter = CellDiameter::side;
  RationalMatrix coefficient_form;
  std::vector<RationalMatrix> interpolation;
  std::vector<RationalMatrix> data_forms;
  std::vector<std::string> candidate_names;

  int coefficient_count() const { return coefficient_form.rows(); }
  int data_count() const { return dim == 1 ? 4 : 16; }
  int candidate_count() const { return static_cast<int>(data_forms.size()); }
};

IndicatorForms derive_indicator_forms(int dim, CellDiameter diameter = CellDiameter::side);

/// Plain-text rational dump of every matrix, for audit.
std::string format_forms(const IndicatorForms& forms);

/// Parses "p/q" or "p".
Rational parse_rational(std::string_view text);

}  // namespace hjb
