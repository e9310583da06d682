#include "mgabor/fourier.hpp"

#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace mgabor {

namespace {

// Applies op to every 1-d line of data along the given axis (row-major
// flattening, axis 0 slowest).
template <typename LineOp>
void for_each_line(CVec& data, int d, int n, int axis, LineOp&& op) {
  std::int64_t stride = 1;
  for (int a = d - 1; a > axis; --a) stride *= n;
  const std::int64_t block = stride * n;
  std::vector<Cplx> line(static_cast<size_t>(n));
  for (std::int64_t base = 0; base < data.size(); base += block) {
    for (std::int64_t off = 0; off < stride; ++off) {
      for (int k = 0; k < n; ++k) line[static_cast<size_t>(k)] = data(base + off + stride * k);
      op(line);
      for (int k = 0; k < n; ++k) data(base + off + stride * k) = line[static_cast<size_t>(k)];
    }
  }
}

}  // namespace

// Grid algebra behind the twiddles: with x_k = -L + kh and xi_j = -X + j/(2L),
// X = n/(4L), the kernel e^{-2 pi i x_k xi_j} splits into
// (-1)^k (-1)^j e^{-2 pi i k j / n} times e^{-i pi n / 2}, and the last factor
// is 1 because n is a multiple of 4.
DiscreteSignal fourier(const DiscreteSignal& f) {
  validate_signal(f, "fourier");
  const GridSpec& g = f.grid;
  const int n = g.n();
  if (n % 4 != 0) throw ValidationError("fourier: n must be a multiple of 4");
  Eigen::FFT<double> fft;
  std::vector<Cplx> in(static_cast<size_t>(n)), out(static_cast<size_t>(n));
  CVec data = f.samples;
  const double h = g.h();
  for (int axis = 0; axis < g.d(); ++axis) {
    for_each_line(data, g.d(), n, axis, [&](std::vector<Cplx>& line) {
      for (int k = 0; k < n; ++k)
        in[static_cast<size_t>(k)] = (k & 1) ? -line[static_cast<size_t>(k)] : line[static_cast<size_t>(k)];
      fft.fwd(out, in);
      for (int j = 0; j < n; ++j)
        line[static_cast<size_t>(j)] = h * ((j & 1) ? -out[static_cast<size_t>(j)] : out[static_cast<size_t>(j)]);
    });
  }
  return {g.dual(), std::move(data)};
}

DiscreteSignal refine2(const DiscreteSignal& f) {
  validate_signal(f, "refine2");
  const GridSpec& g = f.grid;
  const int d = g.d();
  const int n = g.n();
  DiscreteSignal spec = fourier(f);
  // Centered zero padding: the dual grid doubles its point count and
  // half-width while keeping its spacing, and the old bins sit at j + n/2.
  const GridSpec padded(d, 2 * n, 2.0 * spec.grid.half_width());
  CVec wide = CVec::Zero(padded.size());
  std::vector<int> idx(static_cast<size_t>(d));
  for (std::int64_t flat = 0; flat < spec.samples.size(); ++flat) {
    std::int64_t rem = flat, to = 0;
    for (int a = d - 1; a >= 0; --a) {
      idx[static_cast<size_t>(a)] = static_cast<int>(rem % n) + n / 2;
      rem /= n;
    }
    for (int a = 0; a < d; ++a) to = to * (2 * n) + idx[static_cast<size_t>(a)];
    wide(to) = spec.samples(flat);
  }
  return inverse_fourier({padded, std::move(wide)});
}

DiscreteSignal inverse_fourier(const DiscreteSignal& f) {
  validate_signal(f, "inverse_fourier");
  const GridSpec& g = f.grid;
  const int n = g.n();
  if (n % 4 != 0) throw ValidationError("inverse_fourier: n must be a multiple of 4");
  Eigen::FFT<double> fft;
  std::vector<Cplx> in(static_cast<size_t>(n)), out(static_cast<size_t>(n));
  CVec data = f.samples;
  const double scale = g.h() * n;  // input spacing times the 1/n baked into inv()
  for (int axis = 0; axis < g.d(); ++axis) {
    for_each_line(data, g.d(), n, axis, [&](std::vector<Cplx>& line) {
      for (int j = 0; j < n; ++j)
        in[static_cast<size_t>(j)] = (j & 1) ? -line[static_cast<size_t>(j)] : line[static_cast<size_t>(j)];
      fft.inv(out, in);
      for (int k = 0; k < n; ++k)
        line[static_cast<size_t>(k)] = scale * ((k & 1) ? -out[static_cast<size_t>(k)] : out[static_cast<size_t>(k)]);
    });
  }
  return {g.dual(), std::move(data)};
}

}  // namespace mgabor
