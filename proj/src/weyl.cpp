#include "mgabor/weyl.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "mgabor/fourier.hpp"
#include "mgabor/metaplectic.hpp"
#include "mgabor/stft.hpp"
#include "mgabor/windows.hpp"

namespace mgabor {

namespace {

// In-place unnormalized inverse DFT along every axis of a row-major
// d-dimensional array: data[m] <- sum_l data[l] e^{2 pi i m.l / n}.
void inverse_dft_lines(CVec& data, int d, int n) {
  Eigen::FFT<double> fft;
  std::vector<Cplx> in(static_cast<size_t>(n)), out(static_cast<size_t>(n));
  std::int64_t stride = 1;
  for (int axis = d - 1; axis >= 0; --axis) {
    const std::int64_t block = stride * n;
    for (std::int64_t base = 0; base < data.size(); base += block)
      for (std::int64_t off = 0; off < stride; ++off) {
        for (int k = 0; k < n; ++k) in[static_cast<size_t>(k)] = data(base + off + stride * k);
        fft.inv(out, in);
        for (int k = 0; k < n; ++k)
          data(base + off + stride * k) = static_cast<double>(n) * out[static_cast<size_t>(k)];
      }
    stride *= n;
  }
}

}  // namespace

WeylSymbol symbol_from_function(const GridSpec& grid, std::function<Cplx(const Vec&)> fn) {
  if (!fn) throw ValidationError("symbol_from_function: empty function");
  PhaseGrid pg = PhaseGrid::lattice(grid);
  CVec vals(pg.count());
  for (std::int64_t i = 0; i < pg.count(); ++i) vals(i) = fn(pg.point(i));
  return {std::move(pg), std::move(vals), std::move(fn)};
}

DiscreteSignal weyl_apply(const WeylSymbol& a, const DiscreteSignal& f) {
  validate_signal(f, "weyl_apply");
  if (!a.grid.is_lattice() || a.grid.pos_stride() != 1 || a.grid.freq_stride() != 1)
    throw ValidationError("weyl_apply: symbol must cover the full phase lattice (strides 1)");
  if (!approx_same_grid(a.grid.base(), f.grid))
    throw ValidationError("weyl_apply: symbol lattice does not match the signal grid");
  if (a.values.size() != a.grid.count())
    throw ValidationError("weyl_apply: symbol sample count mismatch");

  const GridSpec& g = f.grid;
  const int d = g.d();
  const int n = g.n();
  const std::int64_t pos = g.size();  // n^d, also the frequency count
  std::int64_t fine = 1;
  for (int ax = 0; ax < d; ++ax) fine *= 2 * n;
  if (fine > (std::int64_t{1} << 23) / pos)
    throw ValidationError("weyl_apply: grid too large for midpoint refinement");

  // Midpoints (x_i + y_j)/2 live on the half-step grid, so refine each fixed-
  // frequency column of the symbol to 2n points per axis. Real symbols stay
  // real (the refinement only picks up a spurious imaginary part from the
  // unpaired extreme-frequency bin, dropped here), which makes the resulting
  // kernel exactly Hermitian.
  const bool real_symbol = a.values.imag().cwiseAbs().maxCoeff() == 0.0;
  CMat btab(pos, fine);  // (frequency offset, midpoint), midpoint columns contiguous
  {
    CVec col(pos);
    for (std::int64_t j = 0; j < pos; ++j) {
      for (std::int64_t q = 0; q < pos; ++q) col(q) = a.values(q * pos + j);
      DiscreteSignal refined = refine2({g, col});
      if (real_symbol) refined.samples = refined.samples.real().cast<Cplx>();
      btab.row(j) = refined.samples.transpose();
    }
  }

  // For midpoint index m = i + j and offset delta = i - j (per axis), the
  // frequency sum collapses to an inverse DFT evaluated at delta mod n, times
  // the half-sample twiddle e^{-2 pi i delta h Xi} = (-1)^{sum delta_a}, whose
  // parity equals that of m.
  {
    CVec col(pos);
    for (std::int64_t c = 0; c < fine; ++c) {
      col = btab.col(c);
      inverse_dft_lines(col, d, n);
      btab.col(c) = col;
    }
  }

  const double wfreq = std::pow(g.dual().h(), d);
  CVec out = CVec::Zero(pos);
  std::vector<int> m(static_cast<size_t>(d), 0);
  std::vector<int> lo(static_cast<size_t>(d)), hi(static_cast<size_t>(d)),
      cur(static_cast<size_t>(d));
  const int mmax = 2 * n - 2;
  while (true) {
    int parity = 0;
    std::int64_t mflat = 0;
    for (int ax = 0; ax < d; ++ax) {
      parity += m[static_cast<size_t>(ax)];
      mflat = mflat * (2 * n) + m[static_cast<size_t>(ax)];
      lo[static_cast<size_t>(ax)] = std::max(0, m[static_cast<size_t>(ax)] - (n - 1));
      hi[static_cast<size_t>(ax)] = std::min(n - 1, m[static_cast<size_t>(ax)]);
    }
    const double sign = (parity % 2 == 0) ? 1.0 : -1.0;
    cur = lo;
    while (true) {
      std::int64_t iflat = 0, jflat = 0, dflat = 0;
      for (int ax = 0; ax < d; ++ax) {
        const int ia = cur[static_cast<size_t>(ax)];
        const int ja = m[static_cast<size_t>(ax)] - ia;
        int da = (2 * ia - m[static_cast<size_t>(ax)]) % n;
        if (da < 0) da += n;
        iflat = iflat * n + ia;
        jflat = jflat * n + ja;
        dflat = dflat * n + da;
      }
      out(iflat) += sign * f.samples(jflat) * btab(dflat, mflat);
      int ax = d - 1;
      for (; ax >= 0; --ax) {
        if (++cur[static_cast<size_t>(ax)] <= hi[static_cast<size_t>(ax)]) break;
        cur[static_cast<size_t>(ax)] = lo[static_cast<size_t>(ax)];
      }
      if (ax < 0) break;
    }
    int ax = d - 1;
    for (; ax >= 0; --ax) {
      if (++m[static_cast<size_t>(ax)] <= mmax) break;
      m[static_cast<size_t>(ax)] = 0;
    }
    if (ax < 0) break;
  }
  out *= wfreq * std::pow(g.h(), d);
  return {g, std::move(out)};
}

double symplectic_covariance_check(const SymplecticMatrix& s, const WeylSymbol& a,
                                   const DiscreteSignal& f) {
  validate_signal(f, "symplectic_covariance_check");
  if (!a.evaluator)
    throw ValidationError(
        "symplectic_covariance_check: symbol must carry an evaluator to be composed with S");
  if (2 * f.grid.d() != s.matrix().rows())
    throw ValidationError("symplectic_covariance_check: dimension mismatch");

  const Mat sm = s.matrix();
  auto composed = [&sm, &a](const Vec& z) { return a.evaluator(sm * z); };
  const WeylSymbol as = symbol_from_function(f.grid, composed);
  const DiscreteSignal lhs = weyl_apply(as, f);

  const MetaplecticOperator forward(s);
  const MetaplecticOperator backward(s.inverse());
  const DiscreteSignal rhs =
      apply_metaplectic(backward, weyl_apply(a, apply_metaplectic(forward, f)));

  const DiscreteSignal win = gaussian_window(f.grid);
  const PhaseGrid full = PhaseGrid::lattice(f.grid);
  const Vec m1 = stft(lhs, win, full).values.cwiseAbs();
  const Vec m2 = stft(rhs, win, full).values.cwiseAbs();
  const double denom = m1.norm();
  if (denom == 0.0) return m2.norm();
  return (m1 - m2).norm() / denom;
}

}  // namespace mgabor
