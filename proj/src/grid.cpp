#include "hjb/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hjb {

Grid::Grid(int dim, Point lo, Point hi, Index2 nodes)
    : dim_(dim), lo_(lo), hi_(hi), n_(nodes), dx_{1.0, 1.0} {
  if (dim != 1 && dim != 2) {
    throw std::invalid_argument("grid dimension must be 1 or 2");
  }
  for (int a = 0; a < dim; ++a) {
    if (n_[a] < 5) {
      throw std::invalid_argument("grid needs at least 5 nodes per axis, got " +
                                  std::to_string(n_[a]));
    }
    if (!(hi_[a] > lo_[a]) || !std::isfinite(lo_[a]) || !std::isfinite(hi_[a])) {
      throw std::invalid_argument("grid bounds must satisfy lo < hi");
    }
    dx_[a] = (hi_[a] - lo_[a]) / (n_[a] - 1);
  }
  if (dim == 1) {
    lo_[1] = hi_[1] = 0.0;
    n_[1] = 1;
  }
}

Grid Grid::line(double lo, double hi, int n) { return Grid(1, {lo, 0.0}, {hi, 0.0}, {n, 1}); }

Grid Grid::rectangle(Point lo, Point hi, int nx, int ny) { return Grid(2, lo, hi, {nx, ny}); }

double Grid::node(int axis, int i) const {
  if (axis >= dim_) return lo_[axis];
  if (i == n_[axis] - 1) return hi_[axis];
  return lo_[axis] + i * dx_[axis];
}

std::size_t Grid::node_count() const {
  return static_cast<std::size_t>(n_[0]) * static_cast<std::size_t>(dim_ == 2 ? n_[1] : 1);
}

std::size_t Grid::cell_count() const {
  return static_cast<std::size_t>(cells(0)) * static_cast<std::size_t>(cells(1));
}

Index2 Grid::node_coords(std::size_t flat) const {
  const auto nx = static_cast<std::size_t>(n_[0]);
  return {static_cast<int>(flat % nx), static_cast<int>(flat / nx)};
}

Point Grid::node_point(std::size_t flat) const {
  const Index2 ij = node_coords(flat);
  return {node(0, ij[0]), dim_ == 2 ? node(1, ij[1]) : 0.0};
}

Point Grid::cell_origin(const Index2& c) const {
  return {node(0, c[0]), dim_ == 2 ? node(1, c[1]) : 0.0};
}

bool Grid::same_layout(const Grid& other) const {
  return dim_ == other.dim_ && n_ == other.n_ && lo_ == other.lo_ && hi_ == other.hi_;
}

CellLocation locate_cell(const Grid& grid, const Point& p) {
  CellLocation loc;
  for (int a = 0; a < grid.dim(); ++a) {
    if (!(p[a] >= grid.lo(a) && p[a] <= grid.hi(a))) {
      throw std::out_of_range("foot not clamped");
    }
    const double s = (p[a] - grid.lo(a)) / grid.spacing(a);
    int c = static_cast<int>(std::ceil(s)) - 1;
    c = std::clamp(c, 0, grid.nodes(a) - 2);
    loc.cell[a] = c;
    loc.local[a] = std::clamp(s - c, 0.0, 1.0);
  }
  return loc;
}

ClampedFoot clamp_foot(const Grid& grid, BoundaryPolicy policy, const Point& p) {
  ClampedFoot out{p, false};
  for (int a = 0; a < grid.dim(); ++a) {
    const double lo = grid.lo(a);
    const double hi = grid.hi(a);
    if (policy == BoundaryPolicy::periodic) {
      if (p[a] >= lo && p[a] < hi) continue;
      const double length = hi - lo;
      double w = std::fmod(p[a] - lo, length);
      if (w < 0.0) w += length;
      double wrapped = lo + w;
      if (wrapped >= hi) wrapped = lo;
      out.point[a] = wrapped;
    } else {
      const double c = std::clamp(p[a], lo, hi);
      if (c != p[a]) out.clamped = true;
      out.point[a] = c;
    }
  }
  return out;
}

namespace {

// Value at integer node coordinates, at most one node outside per axis.
double ghost_value(const Grid& grid, std::span<const double> values, int i, int j,
                   BoundaryPolicy policy) {
  const int nx = grid.nodes(0);
  const int ny = grid.nodes(1);
  if (policy == BoundaryPolicy::periodic) {
    const auto wrap = [](int k, int n) {
      const int period = n - 1;
      return ((k % period) + period) % period;
    };
    if (i < 0 || i >= nx) i = wrap(i, nx);
    if (grid.dim() == 2 && (j < 0 || j >= ny)) j = wrap(j, ny);
    return values[grid.node_index(i, j)];
  }
  if (i < 0) {
    return 2.0 * ghost_value(grid, values, 0, j, policy) -
           ghost_value(grid, values, 1, j, policy);
  }
  if (i >= nx) {
    return 2.0 * ghost_value(grid, values, nx - 1, j, policy) -
           ghost_value(grid, values, nx - 2, j, policy);
  }
  if (grid.dim() == 2 && j < 0) {
    return 2.0 * values[grid.node_index(i, 0)] - values[grid.node_index(i, 1)];
  }
  if (grid.dim() == 2 && j >= ny) {
    return 2.0 * values[grid.node_index(i, ny - 1)] - values[grid.node_index(i, ny - 2)];
  }
  return values[grid.node_index(i, j)];
}

}  // namespace

Stencil stencil_values(const Grid& grid, std::span<const double> values, const Index2& cell,
                       BoundaryPolicy policy) {
  Stencil s{};
  const int c0 = cell[0];
  const int nx = grid.nodes(0);
  if (grid.dim() == 1) {
    for (int k = 0; k < 4; ++k) {
      const int i = c0 - 1 + k;
      s[k] = (i >= 0 && i < nx) ? values[i] : ghost_value(grid, values, i, 0, policy);
    }
    return s;
  }
  const int c1 = cell[1];
  const int ny = grid.nodes(1);
  const bool interior = c0 >= 1 && c0 + 2 < nx && c1 >= 1 && c1 + 2 < ny;
  for (int l = 0; l < 4; ++l) {
    const int j = c1 - 1 + l;
    for (int k = 0; k < 4; ++k) {
      const int i = c0 - 1 + k;
      s[4 * l + k] = interior ? values[grid.node_index(i, j)]
                              : ghost_value(grid, values, i, j, policy);
    }
  }
  return s;
}

}  // namespace hjb
