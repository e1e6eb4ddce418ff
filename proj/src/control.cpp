#include "hjb/control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace hjb {

ControlSet ControlSet::empty() { return {}; }

ControlSet ControlSet::box(double lo, double hi, int components) {
  if (!(lo < hi)) throw std::invalid_argument("box control set needs lo < hi");
  if (components < 1 || components > 2) throw std::invalid_argument("box has 1 or 2 components");
  ControlSet s;
  s.kind = ControlKind::box;
  s.components = components;
  for (int c = 0; c < components; ++c) {
    s.lo[c] = lo;
    s.hi[c] = hi;
  }
  return s;
}

ControlSet ControlSet::circle(double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("circle radius must be positive");
  ControlSet s;
  s.kind = ControlKind::circle;
  s.components = 2;
  s.radius = radius;
  return s;
}

int ControlSet::param_dim() const {
  switch (kind) {
    case ControlKind::empty: return 0;
    case ControlKind::box: return components;
    case ControlKind::circle: return 1;
  }
  return 0;
}

bool ControlSet::contains(const Control& a, double tol) const {
  switch (kind) {
    case ControlKind::empty: return true;
    case ControlKind::box:
      for (int c = 0; c < components; ++c)
        if (a[c] < lo[c] - tol || a[c] > hi[c] + tol) return false;
      return true;
    case ControlKind::circle: return std::abs(std::hypot(a[0], a[1]) - radius) <= tol;
  }
  return false;
}

void NMParams::validate() const {
  if (!(reflection > 0.0) || !(expansion > 1.0) || !(expansion > reflection) ||
      !(contraction > 0.0 && contraction < 1.0) || !(shrink > 0.0 && shrink < 1.0)) {
    throw std::invalid_argument("Nelder-Mead coefficients out of range");
  }
  if (coarse_pts < 3) throw std::invalid_argument("coarse grid needs at least 3 points");
  if (max_iter < 0 || !(ftol >= 0.0)) throw std::invalid_argument("bad Nelder-Mead budget");
}

ControlTuple embed(const ControlSet& set, const std::vector<double>& params, int nu) {
  ControlTuple t;
  if (set.kind == ControlKind::empty) return t;
  const int pd = set.param_dim();
  if (static_cast<int>(params.size()) != nu * pd) {
    throw std::invalid_argument("parameter count does not match the control set");
  }
  t.nu = nu;
  for (int k = 0; k < nu; ++k) {
    if (set.kind == ControlKind::box) {
      for (int c = 0; c < pd; ++c) t.a[k][c] = std::clamp(params[k * pd + c], set.lo[c], set.hi[c]);
    } else {
      const double th = params[k];
      t.a[k] = {set.radius * std::cos(th), set.radius * std::sin(th)};
    }
  }
  return t;
}

namespace {

struct Evaluator {
  const Objective& objective;
  const ControlSet& set;
  int nu;
  long count = 0;

  double operator()(const std::vector<double>& params, ControlTuple* out = nullptr) {
    return (*this)(embed(set, params, nu), out);
  }

  double operator()(const ControlTuple& t, ControlTuple* out = nullptr) {
    const double v = objective(t);
    ++count;
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "objective is not finite at control (";
      for (int k = 0; k < t.nu; ++k) {
        os << (k ? "; " : "") << t.a[k][0];
        if (set.components == 2) os << ", " << t.a[k][1];
      }
      os << ")";
      throw std::runtime_error(os.str());
    }
    if (out) *out = t;
    return v;
  }
};

// Coarse values along one search dimension.
std::vector<double> coarse_axis(const ControlSet& set, int c, int pts) {
  std::vector<double> axis(pts);
  for (int i = 0; i < pts; ++i) {
    if (set.kind == ControlKind::circle) {
      axis[i] = 2.0 * std::numbers::pi * i / pts;
    } else {
      axis[i] = set.lo[c] + (set.hi[c] - set.lo[c]) * i / (pts - 1);
    }
  }
  return axis;
}

// Pulls a parameter vector back into the search box (no-op for angles).
void confine(const ControlSet& set, std::vector<double>& x) {
  if (set.kind != ControlKind::box) return;
  const int pd = set.param_dim();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int c = static_cast<int>(i) % pd;
    x[i] = std::clamp(x[i], set.lo[c], set.hi[c]);
  }
}

}  // namespace

MinimizeResult minimize(const Objective& objective, const ControlSet& set, int nu,
                        const NMParams& p) {
  Evaluator eval{objective, set, nu};
  MinimizeResult res;
  if (set.kind == ControlKind::empty) {
    res.value = eval(ControlTuple{}, &res.controls);
    res.evaluations = eval.count;
    return res;
  }

  const int pd = set.param_dim();
  const int dim = nu * pd;

  // Coarse product grid, first parameter fastest; strict < keeps the lowest index.
  std::vector<std::vector<double>> axes(dim);
  for (int i = 0; i < dim; ++i) axes[i] = coarse_axis(set, i % pd, p.coarse_pts);
  // Embedded coarse values, so the grid sweep skips embed().
  std::vector<Control> circle_points(p.coarse_pts);
  if (set.kind == ControlKind::circle) {
    for (int i = 0; i < p.coarse_pts; ++i)
      circle_points[i] = embed(set, {axes[0][i]}, 1).a[0];
  }
  std::vector<double> best(dim);
  double best_val = 0.0;
  std::vector<int> idx(dim, 0);
  bool first = true;
  ControlTuple t;
  t.nu = nu;
  while (true) {
    for (int i = 0; i < dim; ++i) {
      if (set.kind == ControlKind::circle) {
        t.a[i] = circle_points[idx[i]];
      } else {
        t.a[i / pd][i % pd] = axes[i][idx[i]];
      }
    }
    const double v = eval(t);
    if (first || v < best_val) {
      best_val = v;
      for (int i = 0; i < dim; ++i) best[i] = axes[i][idx[i]];
      first = false;
    }
    int d = 0;
    while (d < dim && ++idx[d] == p.coarse_pts) idx[d++] = 0;
    if (d == dim) break;
  }

  // Initial simplex: the seed plus half a coarse step along each dimension.
  std::vector<std::vector<double>> simplex(dim + 1, best);
  std::vector<double> fv(dim + 1, best_val);
  for (int i = 0; i < dim; ++i) {
    const double step = 0.5 * (axes[i][1] - axes[i][0]);
    auto& v = simplex[i + 1];
    v[i] += step;
    if (set.kind == ControlKind::box && v[i] > set.hi[i % pd]) v[i] = best[i] - step;
    confine(set, v);
    fv[i + 1] = eval(v);
  }

  std::vector<int> order(dim + 1);
  std::vector<double> centroid(dim), trial(dim), trial2(dim);
  const auto point = [&](double coef, const std::vector<double>& worst, std::vector<double>& out) {
    for (int i = 0; i < dim; ++i) out[i] = centroid[i] + coef * (centroid[i] - worst[i]);
    confine(set, out);
  };

  for (int iter = 0; iter < p.max_iter; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    const int lo = order.front();
    const int hi = order.back();
    const int nh = order[dim - 1];
    if (fv[hi] - fv[lo] <= p.ftol) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (int v = 0; v <= dim; ++v) {
      if (v == hi) continue;
      for (int i = 0; i < dim; ++i) centroid[i] += simplex[v][i];
    }
    for (int i = 0; i < dim; ++i) centroid[i] /= dim;

    point(p.reflection, simplex[hi], trial);
    const double fr = eval(trial);
    if (fr < fv[lo]) {
      point(p.expansion, simplex[hi], trial2);
      const double fe = eval(trial2);
      if (fe < fr) {
        simplex[hi] = trial2;
        fv[hi] = fe;
      } else {
        simplex[hi] = trial;
        fv[hi] = fr;
      }
      continue;
    }
    if (fr < fv[nh]) {
      simplex[hi] = trial;
      fv[hi] = fr;
      continue;
    }
    // Outside contraction if the reflection improved on the worst, else inside.
    if (fr < fv[hi]) {
      point(p.contraction, simplex[hi], trial2);
    } else {
      point(-p.contraction, simplex[hi], trial2);
    }
    const double fc = eval(trial2);
    if (fc < std::min(fr, fv[hi])) {
      simplex[hi] = trial2;
      fv[hi] = fc;
      continue;
    }
    for (int v = 0; v <= dim; ++v) {
      if (v == lo) continue;
      for (int i = 0; i < dim; ++i)
        simplex[v][i] = simplex[lo][i] + p.shrink * (simplex[v][i] - simplex[lo][i]);
      confine(set, simplex[v]);
      fv[v] = eval(simplex[v]);
    }
  }

  int arg = 0;
  for (int v = 1; v <= dim; ++v)
    if (fv[v] < fv[arg]) arg = v;
  if (fv[arg] < best_val) {
    best = simplex[arg];
    best_val = fv[arg];
  }
  res.controls = embed(set, best, nu);
  res.value = best_val;
  res.evaluations = eval.count;
  return res;
}

}  // namespace hjb
