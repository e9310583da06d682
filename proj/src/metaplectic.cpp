#include "mgabor/metaplectic.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "mgabor/fourier.hpp"

namespace mgabor {

namespace {

// Chirp phases are full quadratic forms, so they do not factor per axis;
// walk the flat index and evaluate y.Cy at every point.
CVec chirp_values(const GridSpec& g, const Mat& c) {
  CVec ph(g.size());
  for (std::int64_t k = 0; k < g.size(); ++k) {
    const Vec y = g.point(k);
    ph(k) = std::polar(1.0, kPi * y.dot(c * y));
  }
  return ph;
}

// Exact transform of the sample train, F(xi) = h^d sum_k f_k e^{sign 2 pi i y_k.xi},
// evaluated by direct summation on an arbitrary output grid (sign -1 forward,
// +1 recovers the trigonometric series from a spectrum).
DiscreteSignal direct_transform_to(const DiscreteSignal& f, const GridSpec& out,
                                   double sign = -1.0) {
  CVec vals(out.size());
  const double w = std::pow(f.grid.h(), f.grid.d());
  for (std::int64_t j = 0; j < out.size(); ++j) {
    const Vec xi = out.point(j);
    Cplx acc{0.0, 0.0};
    for (std::int64_t k = 0; k < f.grid.size(); ++k)
      acc += f.samples(k) * std::polar(1.0, sign * 2.0 * kPi * f.grid.point(k).dot(xi));
    vals(j) = w * acc;
  }
  return {out, std::move(vals)};
}

// Max coordinate reached by samples above rel_tau of the peak magnitude.
double significant_radius(const DiscreteSignal& f, double rel_tau) {
  const double peak = f.samples.cwiseAbs().maxCoeff();
  if (peak == 0.0) return 0.0;
  double r = 0.0;
  for (std::int64_t k = 0; k < f.grid.size(); ++k)
    if (std::abs(f.samples(k)) >= rel_tau * peak)
      r = std::max(r, f.grid.point(k).lpNorm<Eigen::Infinity>());
  return r;
}

// Smallest power-of-two oversampling that keeps a quadrature with total
// integrand frequency (content + sweep) below the refined Nyquist rate.
int pick_refinement(double content, double sweep, double nyquist) {
  int r = 1;
  while (r < 64 && r * nyquist < 1.5 * (content + sweep)) r *= 2;
  if (r * nyquist < 1.5 * (content + sweep))
    throw ComputationError(
        "metaplectic_oracle: kernel oscillates too fast for direct quadrature on this grid");
  return r;
}

double max_row_sum(const Mat& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

// Quadrature of the quadratic kernel for an S-block triple with invertible B,
// mapping a signal on its own grid to the target grid.
DiscreteSignal kernel_quadrature(const Mat& a, const Mat& b, const Mat& dm,
                                 const DiscreteSignal& src, const GridSpec& out) {
  const int d = out.d();
  const Mat binv = b.inverse();
  const Mat m1 = 0.5 * (dm * binv + (dm * binv).transpose());
  const Mat m3 = 0.5 * (binv * a + (binv * a).transpose());
  const Mat bti = binv.transpose();
  const double c = std::pow(std::abs(b.determinant()), -0.5);
  const double w = std::pow(src.grid.h(), d);

  const std::int64_t m = src.grid.size();
  Mat ps(d, m);
  Vec qy(m);
  for (std::int64_t j = 0; j < m; ++j) {
    const Vec y = src.grid.point(j);
    ps.col(j) = bti * y;
    qy(j) = y.dot(m3 * y);
  }

  CVec vals(out.size());
  for (std::int64_t i = 0; i < out.size(); ++i) {
    const Vec x = out.point(i);
    const double qx = x.dot(m1 * x);
    Cplx acc{0.0, 0.0};
    for (std::int64_t j = 0; j < m; ++j) {
      const double phase = kPi * (qx - 2.0 * ps.col(j).dot(x) + qy(j));
      acc += src.samples(j) * std::polar(1.0, phase);
    }
    vals(i) = c * w * acc;
  }
  return {out, std::move(vals)};
}

std::string fmt(double v) { return std::to_string(v); }

}  // namespace

DiscreteSignal apply_chirp(const Mat& c, const DiscreteSignal& f) {
  validate_signal(f, "apply_chirp");
  const int d = f.grid.d();
  if (c.rows() != d || c.cols() != d)
    throw ValidationError("apply_chirp: c must be d x d");
  if (!c.allFinite() || (c - c.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ValidationError("apply_chirp: c must be symmetric and finite");
  DiscreteSignal out = f;
  out.samples.array() *= chirp_values(f.grid, c).array();
  return out;
}

DiscreteSignal apply_scaling(const Mat& a, const DiscreteSignal& f, const GridSpec* out_grid) {
  validate_signal(f, "apply_scaling");
  const int d = f.grid.d();
  const int n = f.grid.n();
  if (a.rows() != d || a.cols() != d || !a.allFinite())
    throw ValidationError("apply_scaling: a must be a finite d x d matrix");
  Eigen::JacobiSVD<Mat> svd(a);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(d - 1);
  if (!(smin > 0.0) || smin < 1e-12 * smax)
    throw ValidationError("apply_scaling: matrix is numerically singular");
  const GridSpec out = out_grid ? *out_grid : f.grid;
  if (out.d() != d || out.n() != n)
    throw ValidationError("apply_scaling: output grid must share d and n with the input");

  if (out_grid == nullptr && a.isIdentity(0.0)) return f;

  // Peak-relative support check: every sample still carrying weight must land
  // inside the output domain after dilation. The 1e-4 threshold flags real
  // wrap-around corruption while admitting signals whose far tail grazes the
  // boundary (those only lose mass the grid never resolved to begin with).
  const double peak = f.samples.cwiseAbs().maxCoeff();
  if (peak == 0.0) return {out, CVec::Zero(out.size())};
  const double tau = 1e-4 * peak;
  double r_out = 0.0;
  for (std::int64_t k = 0; k < f.grid.size(); ++k)
    if (std::abs(f.samples(k)) >= tau)
      r_out = std::max(r_out, (a * f.grid.point(k)).lpNorm<Eigen::Infinity>());
  if (r_out > out.half_width())
    throw ComputationError("apply_scaling: dilated support reaches |x| = " + fmt(r_out) +
                           " outside the grid half-width " + fmt(out.half_width()) +
                           "; increase L");

  const DiscreteSignal spec = fourier(f);
  const GridSpec& fg = spec.grid;  // frequency grid of the source
  const double scale =
      std::pow(fg.h(), d) / std::sqrt(std::abs(a.determinant()));  // fg.h() = source freq step
  const double edge = f.grid.half_width() * (1.0 + 1e-12);
  const Mat ainv = a.inverse();

  const bool diagonal = (a - Mat(a.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
  CVec data = spec.samples;
  if (diagonal) {
    // separable: contract one axis at a time with the evaluation matrix
    // M(i,j) = e^{2 pi i u_i xi_j}, u_i = x_i / a_aa, zeroing out-of-domain rows
    std::int64_t stride_block = 1;
    for (int axis = d - 1; axis >= 0; --axis) {
      CMat m = CMat::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        const double u = out.coord(i) / a(axis, axis);
        if (std::abs(u) > edge) continue;
        for (int j = 0; j < n; ++j) m(i, j) = std::polar(1.0, 2.0 * kPi * u * fg.coord(j));
      }
      const std::int64_t stride = stride_block;
      const std::int64_t block = stride * n;
      CVec line(n), res(n);
      for (std::int64_t base = 0; base < data.size(); base += block)
        for (std::int64_t off = 0; off < stride; ++off) {
          for (int k = 0; k < n; ++k) line(k) = data(base + off + stride * k);
          res.noalias() = m * line;
          for (int k = 0; k < n; ++k) data(base + off + stride * k) = res(k);
        }
      stride_block *= n;  // axes are processed from fastest to slowest
    }
  } else {
    // general dilation: evaluate the Fourier series point by point
    CVec res(out.size());
    std::vector<CVec> tables(static_cast<size_t>(d), CVec(n));
    for (std::int64_t i = 0; i < out.size(); ++i) {
      const Vec u = ainv * out.point(i);
      if (u.lpNorm<Eigen::Infinity>() > edge) {
        res(i) = 0.0;
        continue;
      }
      for (int ax = 0; ax < d; ++ax)
        for (int j = 0; j < n; ++j)
          tables[static_cast<size_t>(ax)](j) = std::polar(1.0, 2.0 * kPi * u(ax) * fg.coord(j));
      Cplx acc{0.0, 0.0};
      std::vector<int> idx(static_cast<size_t>(d), 0);
      for (std::int64_t flat = 0; flat < data.size(); ++flat) {
        Cplx ph = tables[0](idx[0]);
        for (int ax = 1; ax < d; ++ax)
          ph *= tables[static_cast<size_t>(ax)](idx[static_cast<size_t>(ax)]);
        acc += data(flat) * ph;
        for (int ax = d - 1; ax >= 0; --ax) {
          if (++idx[static_cast<size_t>(ax)] < n) break;
          idx[static_cast<size_t>(ax)] = 0;
        }
      }
      res(i) = acc;
    }
    data = std::move(res);
  }
  return {out, scale * data};
}

DiscreteSignal apply_metaplectic(const MetaplecticOperator& op, const DiscreteSignal& f) {
  validate_signal(f, "apply_metaplectic");
  const int d = f.grid.d();
  if (d != op.dim()) throw ValidationError("apply_metaplectic: dimension mismatch");
  const GeneratorFactorization& fac = op.factors();
  DiscreteSignal u = f;
  if (fac.ft_count == 2) {
    u = apply_chirp(Mat(-fac.lambda * Mat::Identity(d, d)), u);
    u = fourier(u);
  }
  u = apply_chirp(fac.pre_chirp, u);
  u = fourier(u);
  u = apply_scaling(fac.scaling, u, &f.grid);
  u = apply_chirp(fac.post_chirp, u);
  return {f.grid, std::move(u.samples)};
}

DiscreteSignal metaplectic_oracle(const SymplecticMatrix& s, const DiscreteSignal& f) {
  validate_signal(f, "metaplectic_oracle");
  const int d = f.grid.d();
  if (d != s.dim()) throw ValidationError("metaplectic_oracle: dimension mismatch");
  const GeneratorFactorization fac = free_factorization(s);
  const GridSpec& g = f.grid;
  const double ell = g.half_width();

  if (fac.ft_count == 1) {
    // The integrand oscillates at the signal's own content frequency plus the
    // kernel sweep |B^-1 x| + |sym(B^-1 A) y|; oversample the quadrature until
    // the refined Nyquist rate clears that budget, otherwise a contracting B
    // aliases the tails of the output.
    const Mat binv = s.b().inverse();
    const Mat m3 = 0.5 * (binv * s.a() + (binv * s.a()).transpose());
    const double sweep = max_row_sum(binv) * ell + max_row_sum(m3) * ell;
    const DiscreteSignal spec = direct_transform_to(f, g.dual());
    const double content =
        std::min(significant_radius(spec, 1e-10), g.dual().half_width());
    const int r = pick_refinement(content, sweep, g.dual().half_width());
    if (r == 1) return kernel_quadrature(s.a(), s.b(), s.dblock(), f, g);
    const GridSpec fine(d, r * g.n(), ell);
    const DiscreteSignal src = direct_transform_to(spec, fine, +1.0);
    return kernel_quadrature(s.a(), s.b(), s.dblock(), src, g);
  }

  // B singular: realize S = S' J C(-lambda I) with S' = S C(lambda I) J^{-1},
  // applying the chirp and the transform explicitly before the S' kernel.
  // The transform is evaluated on an oversampled copy of the dual grid so the
  // second quadrature stays below its Nyquist budget as well.
  DiscreteSignal u = f;
  for (std::int64_t k = 0; k < u.grid.size(); ++k)
    u.samples(k) *=
        std::polar(1.0, -kPi * fac.lambda * u.grid.point(k).squaredNorm());
  const Mat a2 = s.b();
  const Mat b2 = -(s.a() + fac.lambda * s.b());
  const Mat d2 = -(s.c() + fac.lambda * s.dblock());
  const Mat b2inv = b2.inverse();
  const Mat m3 = 0.5 * (b2inv * a2 + (b2inv * a2).transpose());
  const double xi_max = g.dual().half_width();
  const double sweep = max_row_sum(b2inv) * ell + max_row_sum(m3) * xi_max;
  const double content = std::min(significant_radius(u, 1e-10), ell);
  const int r = pick_refinement(content, sweep, ell);
  const GridSpec duale(d, r * g.n(), xi_max);
  const DiscreteSignal v = direct_transform_to(u, duale);
  return kernel_quadrature(a2, b2, d2, v, g);
}

DiscreteSignal free_propagator(double t, const DiscreteSignal& f) {
  validate_signal(f, "free_propagator");
  DiscreteSignal spec = fourier(f);
  for (std::int64_t j = 0; j < spec.grid.size(); ++j)
    spec.samples(j) *= std::polar(1.0, -2.0 * kPi * t * spec.grid.point(j).squaredNorm());
  DiscreteSignal back = inverse_fourier(spec);
  return {f.grid, std::move(back.samples)};
}

}  // namespace mgabor
