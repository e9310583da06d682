#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "mgabor/grid.hpp"

namespace mgabor {

/// Phase-space sampling set in R^{2d}: either a lattice aligned with a signal
/// grid (positions from the grid, frequencies from its DFT grid, each
/// optionally strided) or an explicit list of points. Lattice enumeration is
/// position-major, row-major per factor with axis 0 slowest.
class PhaseGrid {
public:
  static PhaseGrid lattice(const GridSpec& grid, int pos_stride = 1, int freq_stride = 1) {
    if (pos_stride < 1 || grid.n() % pos_stride != 0 || freq_stride < 1 ||
        grid.n() % freq_stride != 0)
      throw ValidationError("PhaseGrid: strides must divide n");
    return PhaseGrid(grid, pos_stride, freq_stride);
  }

  /// pts has 2d rows (x stacked over xi) and one column per point.
  static PhaseGrid points(int d, Mat pts) {
    if (d < 1 || pts.rows() != 2 * d || pts.cols() < 1)
      throw ValidationError("PhaseGrid: points must be a 2d x m matrix, m >= 1");
    return PhaseGrid(d, std::move(pts));
  }

  bool is_lattice() const { return lattice_; }
  int d() const { return lattice_ ? base_.d() : d_; }

  std::int64_t count() const {
    if (!lattice_) return pts_.cols();
    std::int64_t c = 1;
    for (int a = 0; a < 2 * base_.d(); ++a)
      c *= (a < base_.d()) ? pos_count() : freq_count();
    return c;
  }

  int pos_count() const { return base_.n() / pos_stride_; }
  int freq_count() const { return base_.n() / freq_stride_; }

  const GridSpec& base() const {
    require_lattice();
    return base_;
  }
  int pos_stride() const {
    require_lattice();
    return pos_stride_;
  }
  int freq_stride() const {
    require_lattice();
    return freq_stride_;
  }

  /// Product quadrature weight per lattice point; 1 for explicit point lists.
  double weight() const {
    if (!lattice_) return 1.0;
    return std::pow(base_.h() * pos_stride_, base_.d()) *
           std::pow(base_.freq_step() * freq_stride_, base_.d());
  }

  /// The 2d coordinates (x, xi) of the i-th point.
  Vec point(std::int64_t i) const {
    if (!lattice_) return pts_.col(i);
    const int d = base_.d();
    Vec z(2 * d);
    const GridSpec dual = base_.dual();
    std::int64_t fc = 1;
    for (int a = 0; a < d; ++a) fc *= freq_count();
    std::int64_t q = i / fc;  // position part
    std::int64_t j = i % fc;  // frequency part
    for (int a = d - 1; a >= 0; --a) {
      z(d + a) = dual.coord((j % freq_count()) * freq_stride_);
      j /= freq_count();
    }
    for (int a = d - 1; a >= 0; --a) {
      z(a) = base_.coord((q % pos_count()) * pos_stride_);
      q /= pos_count();
    }
    return z;
  }

private:
  PhaseGrid(GridSpec grid, int ps, int fs)
      : lattice_(true), base_(std::move(grid)), pos_stride_(ps), freq_stride_(fs), d_(base_.d()) {}
  PhaseGrid(int d, Mat pts) : lattice_(false), base_(1, 8, 1.0), d_(d), pts_(std::move(pts)) {}

  void require_lattice() const {
    if (!lattice_) throw ValidationError("PhaseGrid: operation requires a lattice grid");
  }

  bool lattice_;
  GridSpec base_;
  int pos_stride_ = 1;
  int freq_stride_ = 1;
  int d_;
  Mat pts_;
};

/// Complex samples indexed by the points of a PhaseGrid.
struct PhaseField {
  PhaseGrid grid;
  CVec values;
};

/// Union of angular sectors in R^{2d} minus a ball around the origin. A point
/// belongs iff |z| >= inner_radius and its direction lies within half_angle of
/// some sector center; the origin itself belongs only when inner_radius == 0
/// (no direction test is possible there).
class ConeSpec {
public:
  struct Sector {
    Vec center;        // unit vector in R^{2d}
    double half_angle; // radians, in (0, pi)
  };

  ConeSpec(std::vector<Sector> sectors, double inner_radius)
      : sectors_(std::move(sectors)), inner_radius_(inner_radius) {
    if (sectors_.empty()) throw ValidationError("ConeSpec: need at least one sector");
    if (!(inner_radius_ >= 0.0)) throw ValidationError("ConeSpec: inner_radius must be >= 0");
    for (auto& s : sectors_) {
      if (!(s.half_angle > 0.0 && s.half_angle < kPi))
        throw ValidationError("ConeSpec: half_angle must lie in (0, pi)");
      const double nrm = s.center.norm();
      if (!(nrm > 0.0)) throw ValidationError("ConeSpec: sector center must be nonzero");
      s.center /= nrm;
    }
  }

  /// Single sector of given half-angle around a center direction.
  static ConeSpec sector(const Vec& center, double half_angle, double inner_radius) {
    return ConeSpec({Sector{center, half_angle}}, inner_radius);
  }

  /// Two antipodal sectors wide enough that their union provably covers all
  /// of R^{2d}; with inner_radius 0 this includes the origin. Test helper.
  static ConeSpec full_space(int d) {
    Vec e = Vec::Zero(2 * d);
    e(0) = 1.0;
    return ConeSpec({Sector{e, 0.75 * kPi}, Sector{-e, 0.75 * kPi}}, 0.0);
  }

  const std::vector<Sector>& sectors() const { return sectors_; }
  double inner_radius() const { return inner_radius_; }

  bool contains(const Vec& z) const {
    const double r = z.norm();
    if (r < inner_radius_) return false;
    if (r == 0.0) return inner_radius_ == 0.0;
    for (const auto& s : sectors_)
      if (s.center.dot(z) >= r * std::cos(s.half_angle)) return true;
    return false;
  }

private:
  std::vector<Sector> sectors_;
  double inner_radius_;
};

}  // namespace mgabor
