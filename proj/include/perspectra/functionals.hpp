#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "perspectra/catalog.hpp"
#include "perspectra/perspective.hpp"

namespace perspectra {

/// Uniform 1-D grid of samples with spacing h > 0.
struct Grid1D {
  std::vector<double> values;
  double h;

  Grid1D(std::vector<double> v, double spacing) : values(std::move(v)), h(spacing) {
    if (values.size() < 2) throw BadParam("Grid1D: need at least 2 samples");
    if (!(h > 0.0)) throw BadParam("Grid1D: spacing must be > 0");
    check_finite(values, "grid");
  }
};

/// Uniform 2-D grid, row-major, equal spacing on both axes.
struct Grid2D {
  std::vector<double> values;
  std::size_t rows, cols;
  double h;

  Grid2D(std::vector<double> v, std::size_t r, std::size_t c, double spacing)
      : values(std::move(v)), rows(r), cols(c), h(spacing) {
    if (rows < 2 || cols < 2) throw BadParam("Grid2D: need at least 2 samples per axis");
    if (values.size() != rows * cols) throw BadParam("Grid2D: shape/data mismatch");
    if (!(h > 0.0)) throw BadParam("Grid2D: spacing must be > 0");
    check_finite(values, "grid");
  }

  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

/// Forward differences (x_{i+1} - x_i)/h; the last cell per axis falls back
/// to the backward difference.
inline std::vector<Vec> gradient_forward(const Grid1D& g) {
  std::size_t m = g.values.size();
  std::vector<Vec> grad(m);
  for (std::size_t i = 0; i + 1 < m; ++i) grad[i] = {(g.values[i + 1] - g.values[i]) / g.h};
  grad[m - 1] = {(g.values[m - 1] - g.values[m - 2]) / g.h};
  return grad;
}

inline std::vector<Vec> gradient_forward(const Grid2D& g) {
  std::vector<Vec> grad(g.rows * g.cols);
  for (std::size_t i = 0; i < g.rows; ++i) {
    for (std::size_t j = 0; j < g.cols; ++j) {
      double di = i + 1 < g.rows ? (g.at(i + 1, j) - g.at(i, j)) / g.h
                                 : (g.at(i, j) - g.at(i - 1, j)) / g.h;
      double dj = j + 1 < g.cols ? (g.at(i, j + 1) - g.at(i, j)) / g.h
                                 : (g.at(i, j) - g.at(i, j - 1)) / g.h;
      grad[i * g.cols + j] = {di, dj};
    }
  }
  return grad;
}

namespace detail {
inline ExtReal cellwise_perspective_sum(const ConvexFunction& phi,
                                        const std::vector<double>& values,
                                        const std::vector<Vec>& grad, double cell_measure) {
  for (double v : values)
    if (v < 0.0) return ExtReal::inf();
  Perspective P(phi);
  CompensatedSum sum;
  for (std::size_t i = 0; i < values.size(); ++i) {
    ExtReal term = P.value(values[i], grad[i]);
    if (!term.is_finite()) return ExtReal::inf();
    sum.add(term.finite());
  }
  return cell_measure * sum.value();
}
}  // namespace detail

/// Rectangle-rule discretization of the gradient-perspective functional
///   integral of phi~(x(t), grad x(t)) over the grid, +inf if any cell < 0.
inline ExtReal gradient_perspective_functional(const ConvexFunction& phi, const Grid1D& g) {
  if (phi.dim() != 1) throw BadParam("gradient_perspective_functional: phi must be 1-D here");
  return detail::cellwise_perspective_sum(phi, g.values, gradient_forward(g), g.h);
}

inline ExtReal gradient_perspective_functional(const ConvexFunction& phi, const Grid2D& g) {
  if (phi.dim() != 2) throw BadParam("gradient_perspective_functional: phi must be 2-D here");
  return detail::cellwise_perspective_sum(phi, g.values, gradient_forward(g), g.h * g.h);
}

/// Fisher information: the gradient perspective of ||.||^2, i.e.
/// h^d * sum ||grad x_i||^2 / x_i over positive cells, +inf as soon as a
/// zero cell has a nonzero gradient.
inline ExtReal fisher_information(const Grid1D& g) {
  return gradient_perspective_functional(make_norm_power(1, 2.0), g);
}
inline ExtReal fisher_information(const Grid2D& g) {
  return gradient_perspective_functional(make_norm_power(2, 2.0), g);
}

/// Total variation: the gradient perspective of ||.||, which collapses to
/// h^d * sum ||grad x_i|| on nonnegative grids.
inline ExtReal total_variation(const Grid1D& g) {
  return gradient_perspective_functional(make_norm_power(1, 1.0), g);
}
inline ExtReal total_variation(const Grid2D& g) {
  return gradient_perspective_functional(make_norm_power(2, 1.0), g);
}

}  // namespace perspectra
