#pragma once

#include <cmath>
#include <string>

#include "mgabor/grid.hpp"

namespace mgabor {

/// Gaussian window g(y) = e^{-pi |y|^2}; optionally L^2-normalized.
inline DiscreteSignal gaussian_window(const GridSpec& grid, bool normalized = false) {
  CVec s(grid.size());
  for (std::int64_t k = 0; k < grid.size(); ++k)
    s(k) = std::exp(-kPi * grid.point(k).squaredNorm());
  if (normalized) {
    // ||e^{-pi|y|^2}||_2 = 2^{-d/4} in the continuum; use the discrete norm so
    // the result has unit norm on the grid it lives on.
    const double nrm = std::sqrt(std::pow(grid.h(), grid.d())) * s.norm();
    s /= nrm;
  }
  return {grid, std::move(s)};
}

/// Shifted Gaussian e^{-pi |y - x0|^2}.
inline DiscreteSignal shifted_gaussian_window(const GridSpec& grid, const Vec& x0) {
  if (x0.size() != grid.d()) throw ValidationError("shifted_gaussian_window: bad shift size");
  CVec s(grid.size());
  for (std::int64_t k = 0; k < grid.size(); ++k)
    s(k) = std::exp(-kPi * (grid.point(k) - x0).squaredNorm());
  return {grid, std::move(s)};
}

/// Hermite-type windows: degree 1 is y_1 e^{-pi |y|^2} (odd), degree 2 is
/// (4 pi y_1^2 - 1) e^{-pi |y|^2} (even, orthogonal to the Gaussian).
inline DiscreteSignal hermite_window(const GridSpec& grid, int degree) {
  if (degree != 1 && degree != 2) throw ValidationError("hermite_window: degree must be 1 or 2");
  CVec s(grid.size());
  for (std::int64_t k = 0; k < grid.size(); ++k) {
    const Vec y = grid.point(k);
    const double gauss = std::exp(-kPi * y.squaredNorm());
    s(k) = (degree == 1) ? y(0) * gauss : (4.0 * kPi * y(0) * y(0) - 1.0) * gauss;
  }
  return {grid, std::move(s)};
}

/// Algebraically decaying window (1 + |y|^2)^{-order}.
inline DiscreteSignal algebraic_window(const GridSpec& grid, double order = 2.0) {
  if (!(order > 0)) throw ValidationError("algebraic_window: order must be positive");
  CVec s(grid.size());
  for (std::int64_t k = 0; k < grid.size(); ++k)
    s(k) = std::pow(1.0 + grid.point(k).squaredNorm(), -order);
  return {grid, std::move(s)};
}

/// Window registry used by the CLI and verification configs.
inline DiscreteSignal window_by_id(const GridSpec& grid, const std::string& id) {
  if (id == "gauss") return gaussian_window(grid);
  if (id == "gauss-normalized") return gaussian_window(grid, true);
  if (id == "hermite1") return hermite_window(grid, 1);
  if (id == "hermite2") return hermite_window(grid, 2);
  if (id == "algebraic4") return algebraic_window(grid, 2.0);  // (1+|y|^2)^{-2} ~ |y|^{-4}
  throw ValidationError("window_by_id: unknown window id '" + id + "'");
}

}  // namespace mgabor
