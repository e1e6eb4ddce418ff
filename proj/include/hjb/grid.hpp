#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace hjb {

/// A point in one or two space dimensions. One-dimensional problems use the
/// first coordinate and keep the second at zero.
using Point = std::array<double, 2>;

/// Integer cell or node coordinates, one entry per axis.
using Index2 = std::array<int, 2>;

enum class BoundaryPolicy { periodic, extrapolate };

/// Uniform node-centered Cartesian grid in 1D or 2D. An axis with n nodes has
/// n-1 cells; node(0) is lo and node(n-1) is hi exactly.
class Grid {
 public:
  /// Five nodes on [0, 1].
  Grid() : Grid(1, {0.0, 0.0}, {1.0, 0.0}, {5, 1}) {}
  Grid(int dim, Point lo, Point hi, Index2 nodes);

  static Grid line(double lo, double hi, int n);
  static Grid rectangle(Point lo, Point hi, int nx, int ny);

  int dim() const { return dim_; }
  double lo(int axis) const { return lo_[axis]; }
  double hi(int axis) const { return hi_[axis]; }
  int nodes(int axis) const { return n_[axis]; }
  int cells(int axis) const { return axis < dim_ ? n_[axis] - 1 : 1; }
  double spacing(int axis) const { return dx_[axis]; }

  /// Coordinate of node i along an axis.
  double node(int axis, int i) const;

  std::size_t node_count() const;
  std::size_t cell_count() const;

  std::size_t node_index(int i, int j = 0) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(j) * static_cast<std::size_t>(n_[0]);
  }
  std::size_t cell_index(const Index2& c) const {
    return static_cast<std::size_t>(c[0]) +
           static_cast<std::size_t>(c[1]) * static_cast<std::size_t>(cells(0));
  }
  Index2 node_coords(std::size_t flat) const;
  Point node_point(std::size_t flat) const;
  Point cell_origin(const Index2& c) const;

  bool same_layout(const Grid& other) const;

 private:
  int dim_;
  Point lo_;
  Point hi_;
  Index2 n_;
  Point dx_;
};

struct CellLocation {
  Index2 cell{0, 0};
  Point local{0.0, 0.0};  ///< x̂ in [0,1] per axis
};

/// Finds the cell containing p. A point on an interior node belongs to the
/// cell on its left; p == lo belongs to cell 0 and p == hi to cell n-2.
/// Throws std::out_of_range("foot not clamped") for points off the grid.
CellLocation locate_cell(const Grid& grid, const Point& p);

struct ClampedFoot {
  Point point;
  bool clamped = false;
};

/// Periodic: wraps each coordinate into [lo, hi). Extrapolate: projects onto
/// the closed domain and reports whether any coordinate moved.
ClampedFoot clamp_foot(const Grid& grid, BoundaryPolicy policy, const Point& p);

/// Node values on a grid, row-major with x fastest.
struct Field {
  Grid grid;
  std::vector<double> values;
  double time = 0.0;

  double at(int i, int j = 0) const { return values[grid.node_index(i, j)]; }
};

/// Values of the 4 (1D) or 4x4 (2D, x fastest) stencil around a cell. Only
/// the first 4 entries are meaningful in 1D.
using Stencil = std::array<double, 16>;

/// Reads the stencil {c-1, ..., c+2} per axis. Out-of-range indices are
/// resolved by the policy: periodic wraps with node n-1 identified with
/// node 0, extrapolate fills ghosts linearly from the two nearest nodes.
Stencil stencil_values(const Grid& grid, std::span<const double> values,
                       const Index2& cell, BoundaryPolicy policy);

inline Stencil stencil_values(const Field& field, const Index2& cell,
                              BoundaryPolicy policy) {
  return stencil_values(field.grid, field.values, cell, policy);
}

/// Samples a function at every node.
template <class F>
Field sample(const Grid& grid, F&& f, double time = 0.0) {
  Field field{grid, std::vector<double>(grid.node_count()), time};
  for (std::size_t k = 0; k < field.values.size(); ++k) {
    field.values[k] = f(grid.node_point(k));
  }
  return field;
}

}  // namespace hjb
