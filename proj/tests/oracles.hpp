#pragma once

// Slow reference implementations used only by tests. Everything here works
// straight from grid coordinates with direct summation, independent of the
// library's FFT/twiddle code paths.

#include <cmath>
#include <cstdint>
#include <vector>

#include <mgabor/grid.hpp>
#include <mgabor/rng.hpp>
#include <mgabor/types.hpp>

namespace oracles {

using mgabor::CVec;
using mgabor::Cplx;
using mgabor::DiscreteSignal;
using mgabor::GridSpec;
using mgabor::kPi;
using mgabor::Vec;

// Direct O(size^2) centered Fourier quadrature from raw coordinates.
inline DiscreteSignal naive_fourier(const DiscreteSignal& f) {
  const GridSpec out_grid = f.grid.dual();
  CVec out(out_grid.size());
  const double w = std::pow(f.grid.h(), f.grid.d());
  for (std::int64_t j = 0; j < out_grid.size(); ++j) {
    const Vec xi = out_grid.point(j);
    Cplx acc{0.0, 0.0};
    for (std::int64_t k = 0; k < f.grid.size(); ++k) {
      const double phase = -2.0 * kPi * f.grid.point(k).dot(xi);
      acc += f.samples(k) * Cplx{std::cos(phase), std::sin(phase)};
    }
    out(j) = w * acc;
  }
  return {out_grid, out};
}

// Random band-limited decaying signal: a few modulated Gaussian bumps with
// centers and frequencies in [-2, 2]^d, built directly in position space.
inline DiscreteSignal random_bandlimited(const GridSpec& grid, std::uint64_t seed) {
  mgabor::Rng rng(seed);
  const int bumps = 8;
  std::vector<Vec> xs, xis;
  std::vector<Cplx> cs;
  for (int b = 0; b < bumps; ++b) {
    Vec x(grid.d()), xi(grid.d());
    for (int a = 0; a < grid.d(); ++a) x(a) = rng.uniform(-2.0, 2.0);
    for (int a = 0; a < grid.d(); ++a) xi(a) = rng.uniform(-2.0, 2.0);
    xs.push_back(x);
    xis.push_back(xi);
    cs.push_back(Cplx{rng.gauss(), rng.gauss()});
  }
  CVec s = CVec::Zero(grid.size());
  for (std::int64_t k = 0; k < grid.size(); ++k) {
    const Vec y = grid.point(k);
    for (int b = 0; b < bumps; ++b) {
      const double phase = 2.0 * kPi * xis[static_cast<size_t>(b)].dot(y);
      s(k) += cs[static_cast<size_t>(b)] * Cplx{std::cos(phase), std::sin(phase)} *
              std::exp(-kPi * (y - xs[static_cast<size_t>(b)]).squaredNorm());
    }
  }
  return {grid, std::move(s)};
}

inline double sup_diff(const CVec& a, const CVec& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Direct quadrature of V_g f(z) = h^d sum f(y) conj(g(y - x)) e^{-2 pi i y.xi}
// with the window argument wrapped into [-L, L) by coordinate arithmetic.
// Positions x must land on grid points after wrapping.
inline Cplx stft_point(const DiscreteSignal& f, const DiscreteSignal& g, const Vec& z) {
  const GridSpec& grid = f.grid;
  const int d = grid.d();
  const double L = grid.half_width();
  const double h = grid.h();
  const int n = grid.n();
  Cplx acc{0.0, 0.0};
  for (std::int64_t k = 0; k < grid.size(); ++k) {
    const Vec y = grid.point(k);
    double phase = 0.0;
    std::int64_t gflat = 0;
    for (int a = 0; a < d; ++a) {
      double v = y(a) - z(a);
      v -= 2.0 * L * std::floor((v + L) / (2.0 * L));
      int j = static_cast<int>(std::llround((v + L) / h)) % n;
      if (j < 0) j += n;
      gflat = gflat * n + j;
      phase -= 2.0 * kPi * y(a) * z(d + a);
    }
    acc += f.samples(k) * std::conj(g.samples(gflat)) * Cplx{std::cos(phase), std::sin(phase)};
  }
  return std::pow(h, d) * acc;
}

// Dense double quadrature of the Weyl operator with an analytic symbol:
// out(x) = h^d sum_y [dxi^d sum_l sym((x+y)/2, xi_l) e^{2 pi i (x-y).xi_l}] f(y).
// O(size^3) evaluations; keep the grids small.
template <typename Symbol>
inline DiscreteSignal weyl_dense(const Symbol& sym, const DiscreteSignal& f) {
  const GridSpec& g = f.grid;
  const GridSpec dual = g.dual();
  const int d = g.d();
  const double w = std::pow(g.h() * dual.h(), d);
  CVec out(g.size());
  Vec zmid(2 * d);
  for (std::int64_t i = 0; i < g.size(); ++i) {
    const Vec x = g.point(i);
    Cplx acc{0.0, 0.0};
    for (std::int64_t j = 0; j < g.size(); ++j) {
      const Vec y = g.point(j);
      zmid.head(d) = 0.5 * (x + y);
      Cplx ker{0.0, 0.0};
      for (std::int64_t l = 0; l < dual.size(); ++l) {
        const Vec xi = dual.point(l);
        zmid.tail(d) = xi;
        const double phase = 2.0 * kPi * (x - y).dot(xi);
        ker += sym(zmid) * Cplx{std::cos(phase), std::sin(phase)};
      }
      acc += ker * f.samples(j);
    }
    out(i) = w * acc;
  }
  return {g, std::move(out)};
}

// Global-phase-aligned relative L2 gap: min over unimodular alpha of
// ||a - alpha b|| / ||a||.
inline double phase_aligned_residual(const CVec& a, const CVec& b) {
  const Cplx ip = b.dot(a);  // sum conj(b) a
  const Cplx alpha = (std::abs(ip) == 0.0) ? Cplx{1.0, 0.0} : ip / std::abs(ip);
  const double na = a.norm();
  if (na == 0.0) return b.norm();
  return (a - alpha * b).norm() / na;
}

}  // namespace oracles
