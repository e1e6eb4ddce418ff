#include "hjb/indicator_forms.hpp"

#include <sstream>
#include <stdexcept>
#include <utility>

namespace hjb {

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool RationalMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (int r = 0; r < rows_; ++r)
    for (int c = r + 1; c < cols_; ++c)
      if ((*this)(r, c) != (*this)(c, r)) return false;
  return true;
}

std::vector<double> RationalMatrix::to_double() const {
  std::vector<double> out;
  out.reserve(data_.size());
  for (const auto& q : data_) out.push_back(q.convert_to<double>());
  return out;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix shape mismatch");
  RationalMatrix p(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const Rational& aik = a(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < b.cols(); ++j) {
        if (b(k, j) != 0) p(i, j) += aik * b(k, j);
      }
    }
  }
  return p;
}

RationalMatrix inverse(const RationalMatrix& m) {
  const int n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("inverse of a non-square matrix");
  RationalMatrix a = m;
  RationalMatrix inv(n, n);
  for (int i = 0; i < n; ++i) inv(i, i) = 1;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    while (pivot < n && a(pivot, col) == 0) ++pivot;
    if (pivot == n) throw std::domain_error("singular interpolation matrix");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(a(pivot, j), a(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    const Rational scale = a(col, col);
    for (int j = 0; j < n; ++j) {
      a(col, j) /= scale;
      inv(col, j) /= scale;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || a(r, col) == 0) continue;
      const Rational f = a(r, col);
      for (int j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

const std::vector<Monomial>& coefficient_basis(int dim) {
  static const std::vector<Monomial> cubic{{0, 0}, {1, 0}, {2, 0}, {3, 0}};
  static const std::vector<Monomial> bicubic{
      {0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1},
      {1, 2}, {0, 3}, {3, 1}, {2, 2}, {1, 3}, {3, 2}, {2, 3}, {3, 3}};
  if (dim == 1) return cubic;
  if (dim == 2) return bicubic;
  throw std::invalid_argument("dimension must be 1 or 2");
}

namespace {

// d^k/dx^k x^p = falling(p, k) x^(p-k)
long falling(int p, int k) {
  if (k > p) return 0;
  long f = 1;
  for (int i = 0; i < k; ++i) f *= p - i;
  return f;
}

// ∫_0^1 x^e dx
Rational unit_integral(int e) { return Rational(1, e + 1); }

RationalMatrix coefficient_form(int dim, CellDiameter diameter) {
  const auto& basis = coefficient_basis(dim);
  const int n = static_cast<int>(basis.size());
  // Squared ratio of the indicator length scale to the cell side.
  const Rational ratio2 = (dim == 2 && diameter == CellDiameter::diagonal) ? 2 : 1;
  RationalMatrix m(n, n);
  const int max_y = dim == 2 ? 3 : 0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const Monomial a = basis[r];
      const Monomial b = basis[c];
      Rational sum = 0;
      for (int ax = 0; ax <= 3; ++ax) {
        for (int ay = 0; ay <= max_y; ++ay) {
          const int order = ax + ay;
          if (order < 2) continue;
          const long ca = falling(a.px, ax) * falling(a.py, ay);
          const long cb = falling(b.px, ax) * falling(b.py, ay);
          if (ca == 0 || cb == 0) continue;
          Rational term = Rational(ca * cb);
          term *= unit_integral(a.px + b.px - 2 * ax);
          if (dim == 2) term *= unit_integral(a.py + b.py - 2 * ay);
          for (int k = 2; k < order; ++k) term *= ratio2;
          sum += term;
        }
      }
      m(r, c) = sum;
    }
  }
  return m;
}

Rational power(int base, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

struct CandidateLayout {
  std::string name;
  std::vector<int> data;            // stencil indices used
  std::vector<Monomial> monomials;  // candidate basis
};

std::vector<CandidateLayout> candidate_layouts(int dim) {
  std::vector<CandidateLayout> out;
  if (dim == 1) {
    const std::vector<Monomial> quad{{0, 0}, {1, 0}, {2, 0}};
    out.push_back({"Q", {0, 1, 2, 3}, coefficient_basis(1)});
    out.push_back({"L", {0, 1, 2}, quad});
    out.push_back({"R", {1, 2, 3}, quad});
    return out;
  }
  const std::vector<Monomial> biquad{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1},
                                     {0, 2}, {2, 1}, {1, 2}, {2, 2}};
  std::vector<int> all(16);
  for (int k = 0; k < 16; ++k) all[k] = k;
  out.push_back({"opt", all, coefficient_basis(2)});
  // Lower-left corner of each 3x3 substencil, in stencil offsets 0..3.
  const std::pair<const char*, std::pair<int, int>> subs[] = {
      {"ne", {1, 1}}, {"nw", {0, 1}}, {"sw", {0, 0}}, {"se", {1, 0}}};
  for (const auto& [name, corner] : subs) {
    CandidateLayout lay{name, {}, biquad};
    for (int l = 0; l < 3; ++l)
      for (int k = 0; k < 3; ++k) lay.data.push_back(4 * (corner.second + l) + corner.first + k);
    out.push_back(lay);
  }
  return out;
}

int basis_position(const std::vector<Monomial>& basis, Monomial m) {
  for (int i = 0; i < static_cast<int>(basis.size()); ++i)
    if (basis[i].px == m.px && basis[i].py == m.py) return i;
  throw std::logic_error("monomial not in basis");
}

}  // namespace

IndicatorForms derive_indicator_forms(int dim, CellDiameter diameter) {
  IndicatorForms forms;
  forms.dim = dim;
  forms.diameter = diameter;
  forms.coefficient_form = coefficient_form(dim, diameter);
  const auto& basis = coefficient_basis(dim);
  const int ncoef = static_cast<int>(basis.size());
  const int ndata = forms.data_count();
  for (const auto& lay : candidate_layouts(dim)) {
    const int s = static_cast<int>(lay.data.size());
    RationalMatrix vandermonde(s, s);
    for (int r = 0; r < s; ++r) {
      const int node = lay.data[r];
      const int xi = (dim == 1 ? node : node % 4) - 1;
      const int yi = (dim == 1 ? 0 : node / 4) - 1;
      for (int c = 0; c < s; ++c) {
        const Monomial m = lay.monomials[c];
        vandermonde(r, c) = power(xi, m.px) * (dim == 2 ? power(yi, m.py) : Rational(1));
      }
    }
    const RationalMatrix local = inverse(vandermonde);
    RationalMatrix interp(ncoef, ndata);
    for (int r = 0; r < s; ++r) {
      const int row = basis_position(basis, lay.monomials[r]);
      for (int c = 0; c < s; ++c) interp(row, lay.data[c]) = local(r, c);
    }
    forms.data_forms.push_back(interp.transpose() * forms.coefficient_form * interp);
    forms.interpolation.push_back(std::move(interp));
    forms.candidate_names.push_back(lay.name);
  }
  return forms;
}

namespace {

void write_matrix(std::ostringstream& os, std::string_view name, const RationalMatrix& m) {
  os << name << " " << m.rows() << "x" << m.cols() << "\n";
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) os << (c ? " " : "") << m(r, c);
    os << "\n";
  }
}

}  // namespace

std::string format_forms(const IndicatorForms& forms) {
  std::ostringstream os;
  os << "# dimension " << forms.dim << ", length scale "
     << (forms.diameter == CellDiameter::side ? "side" : "diagonal")
     << ", indicator = quadratic form / dx^2\n";
  write_matrix(os, "M", forms.coefficient_form);
  for (int k = 0; k < forms.candidate_count(); ++k) {
    write_matrix(os, "A_" + forms.candidate_names[k], forms.data_forms[k]);
  }
  return os.str();
}

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(std::string(text));
  const Rational num(std::string(text.substr(0, slash)));
  const Rational den(std::string(text.substr(slash + 1)));
  if (den == 0) throw std::invalid_argument("zero denominator");
  return num / den;
}

}  // namespace hjb
