#pragma once

#include <cmath>
#include <cstdint>

#include "mgabor/errors.hpp"
#include "mgabor/types.hpp"

namespace mgabor {

/// Uniform truncated grid covering [-L, L)^d with n samples per axis.
/// Coordinates are x_k = -L + k h, h = 2L/n; the implied frequency grid has
/// spacing 1/(2L) and covers [-n/(4L), n/(4L)). Flat indexing is row-major
/// with axis 0 slowest.
class GridSpec {
public:
  GridSpec(int d, int n, double half_width) : d_(d), n_(n), half_width_(half_width) {
    if (d_ < 1) throw ValidationError("GridSpec: d must be >= 1");
    if (n_ < 8 || (n_ & (n_ - 1)) != 0)
      throw ValidationError("GridSpec: n must be a power of two, n >= 8");
    if (!(half_width_ > 0.0) || !std::isfinite(half_width_))
      throw ValidationError("GridSpec: half_width must be positive and finite");
    std::int64_t sz = 1;
    for (int a = 0; a < d_; ++a) {
      sz *= n_;
      if (sz > (std::int64_t{1} << 26))
        throw ValidationError("GridSpec: n^d too large");
    }
    size_ = sz;
  }

  int d() const { return d_; }
  int n() const { return n_; }
  double half_width() const { return half_width_; }
  std::int64_t size() const { return size_; }

  double h() const { return 2.0 * half_width_ / n_; }
  double freq_step() const { return 1.0 / (2.0 * half_width_); }
  double freq_half_width() const { return n_ / (4.0 * half_width_); }
  GridSpec dual() const { return GridSpec(d_, n_, freq_half_width()); }

  /// Axis coordinate of index k in [0, n).
  double coord(std::int64_t k) const { return -half_width_ + h() * static_cast<double>(k); }

  void unflatten(std::int64_t flat, int* idx) const {
    for (int a = d_ - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(flat % n_);
      flat /= n_;
    }
  }

  std::int64_t flatten(const int* idx) const {
    std::int64_t flat = 0;
    for (int a = 0; a < d_; ++a) flat = flat * n_ + idx[a];
    return flat;
  }

  /// d-dimensional coordinates of a flat index.
  Vec point(std::int64_t flat) const {
    Vec x(d_);
    for (int a = d_ - 1; a >= 0; --a) {
      x(a) = coord(flat % n_);
      flat /= n_;
    }
    return x;
  }

  bool operator==(const GridSpec& o) const {
    return d_ == o.d_ && n_ == o.n_ && half_width_ == o.half_width_;
  }

private:
  int d_;
  int n_;
  double half_width_;
  std::int64_t size_;
};

/// Complex samples of a function on a GridSpec.
struct DiscreteSignal {
  GridSpec grid;
  CVec samples;
};

inline void validate_signal(const DiscreteSignal& f, const char* who) {
  if (f.samples.size() != f.grid.size())
    throw ValidationError(std::string(who) + ": sample count does not match grid size");
  if (!f.samples.allFinite())
    throw ValidationError(std::string(who) + ": samples must be finite");
}

/// Grid equality up to relative rounding slack in the half-width
/// (dual().dual() reproduces a non-dyadic half-width only to an ulp).
inline bool approx_same_grid(const GridSpec& a, const GridSpec& b, double rtol = 1e-9) {
  return a.d() == b.d() && a.n() == b.n() &&
         std::abs(a.half_width() - b.half_width()) <= rtol * std::max(a.half_width(), b.half_width());
}

inline void validate_same_grid(const DiscreteSignal& f, const DiscreteSignal& g, const char* who) {
  validate_signal(f, who);
  validate_signal(g, who);
  if (!approx_same_grid(f.grid, g.grid))
    throw ValidationError(std::string(who) + ": signals on different grids");
}

/// Copy f into a wider grid with the same sample spacing, zero-filling the
/// new margin. The target extent must contain the source extent and align
/// with its sample points (integral index offset).
inline DiscreteSignal zero_embed(const DiscreteSignal& f, const GridSpec& target) {
  validate_signal(f, "zero_embed");
  const GridSpec& src = f.grid;
  if (target.d() != src.d()) throw ValidationError("zero_embed: dimension mismatch");
  if (target == src) return f;
  if (std::abs(target.h() / src.h() - 1.0) > 1e-12)
    throw ValidationError("zero_embed: target must keep the sample spacing");
  const double off_real = (target.half_width() - src.half_width()) / src.h();
  const std::int64_t off = static_cast<std::int64_t>(std::llround(off_real));
  if (off < 0 || std::abs(off_real - static_cast<double>(off)) > 1e-9)
    throw ValidationError("zero_embed: grids do not align");
  CVec out = CVec::Zero(target.size());
  for (std::int64_t k = 0; k < src.size(); ++k) {
    std::int64_t rem = k, tf = 0, scale = 1;
    for (int a = src.d() - 1; a >= 0; --a) {
      tf += scale * (rem % src.n() + off);
      rem /= src.n();
      scale *= target.n();
    }
    out(tf) = f.samples(k);
  }
  return {target, std::move(out)};
}

/// L^2 inner product <f, g> = h^d sum f conj(g).
inline Cplx inner(const DiscreteSignal& f, const DiscreteSignal& g) {
  validate_same_grid(f, g, "inner");
  return std::pow(f.grid.h(), f.grid.d()) * g.samples.dot(f.samples);
}

inline double l2_norm(const DiscreteSignal& f) {
  validate_signal(f, "l2_norm");
  return std::sqrt(std::pow(f.grid.h(), f.grid.d())) * f.samples.norm();
}

}  // namespace mgabor
