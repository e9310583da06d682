#include "mgabor/stft.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "mgabor/fourier.hpp"

namespace mgabor {

namespace {

constexpr double kOnGridTol = 1e-9;

int wrap(int k, int n) {
  k %= n;
  return k < 0 ? k + n : k;
}

// Translation offsets in index units; false if any component is off-grid.
bool index_offsets(const GridSpec& g, const Vec& x, std::vector<int>& mshift) {
  mshift.assign(static_cast<size_t>(g.d()), 0);
  for (int a = 0; a < g.d(); ++a) {
    const double t = x(a) / g.h();
    const auto m = std::llround(t);
    if (std::abs(t - static_cast<double>(m)) > kOnGridTol * std::max(1.0, std::abs(t)))
      return false;
    mshift[static_cast<size_t>(a)] = wrap(static_cast<int>(m % g.n()), g.n());
  }
  return true;
}

// out[k] = in[k - mshift mod n per axis]
CVec circular_translate(const CVec& in, int d, int n, const std::vector<int>& mshift) {
  CVec out(in.size());
  std::vector<int> idx(static_cast<size_t>(d), 0);
  for (std::int64_t flat = 0; flat < in.size(); ++flat) {
    std::int64_t src = 0;
    for (int a = 0; a < d; ++a)
      src = src * n + wrap(idx[static_cast<size_t>(a)] - mshift[static_cast<size_t>(a)], n);
    out(flat) = in(src);
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[static_cast<size_t>(a)] < n) break;
      idx[static_cast<size_t>(a)] = 0;
    }
  }
  return out;
}

// Per-axis tables exp(sign 2 pi i coord(k) xi_a); their product over axes is
// the separable phase exp(sign 2 pi i y.xi).
std::vector<CVec> phase_tables(const GridSpec& g, const Vec& xi, double sign) {
  std::vector<CVec> tables(static_cast<size_t>(g.d()));
  for (int a = 0; a < g.d(); ++a) {
    CVec t(g.n());
    for (int k = 0; k < g.n(); ++k)
      t(k) = std::polar(1.0, sign * 2.0 * kPi * g.coord(k) * xi(a));
    tables[static_cast<size_t>(a)] = std::move(t);
  }
  return tables;
}

void apply_phase(CVec& data, const std::vector<CVec>& tables, int d, int n) {
  std::vector<int> idx(static_cast<size_t>(d), 0);
  for (std::int64_t flat = 0; flat < data.size(); ++flat) {
    Cplx ph = tables[0](idx[0]);
    for (int a = 1; a < d; ++a) ph *= tables[static_cast<size_t>(a)](idx[static_cast<size_t>(a)]);
    data(flat) *= ph;
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[static_cast<size_t>(a)] < n) break;
      idx[static_cast<size_t>(a)] = 0;
    }
  }
}

// prod[k] = f[k] conj(g[k - p + n/2 mod n]), the integrand of V_g f at the
// grid position with absolute index p.
void window_product_row(const CVec& fs, const CVec& gs, int d, int n, const std::vector<int>& pabs,
                        CVec& prod) {
  prod.resize(fs.size());
  std::vector<int> idx(static_cast<size_t>(d), 0);
  for (std::int64_t flat = 0; flat < fs.size(); ++flat) {
    std::int64_t src = 0;
    for (int a = 0; a < d; ++a)
      src = src * n + wrap(idx[static_cast<size_t>(a)] - pabs[static_cast<size_t>(a)] + n / 2, n);
    prod(flat) = fs(flat) * std::conj(gs(src));
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[static_cast<size_t>(a)] < n) break;
      idx[static_cast<size_t>(a)] = 0;
    }
  }
}

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

void require_aligned(const PhaseGrid& pg, const GridSpec& g, const char* where) {
  if (!approx_same_grid(pg.base(), g))
    throw ValidationError(std::string(where) + ": lattice must align with the signal grid");
}

// Streams one full-frequency STFT row per lattice position and hands the
// strided entries to visit(z, value) in enumeration order.
template <typename Visit>
void stream_stft_lattice(const DiscreteSignal& f, const DiscreteSignal& g, const PhaseGrid& pg,
                         Visit&& visit) {
  const GridSpec& grid = f.grid;
  const int d = grid.d();
  const int n = grid.n();
  const int sp = pg.pos_stride();
  const int sf = pg.freq_stride();
  const GridSpec dual = grid.dual();
  const std::int64_t rows = ipow(pg.pos_count(), d);
  const std::int64_t cols = ipow(pg.freq_count(), d);
  std::vector<int> q(static_cast<size_t>(d), 0), pabs(static_cast<size_t>(d));
  CVec prod;
  Vec z(2 * d);
  for (std::int64_t row = 0; row < rows; ++row) {
    for (int a = 0; a < d; ++a) {
      pabs[static_cast<size_t>(a)] = q[static_cast<size_t>(a)] * sp;
      z(a) = grid.coord(pabs[static_cast<size_t>(a)]);
    }
    window_product_row(f.samples, g.samples, d, n, pabs, prod);
    const DiscreteSignal spec = fourier({grid, prod});
    std::vector<int> jq(static_cast<size_t>(d), 0);
    for (std::int64_t col = 0; col < cols; ++col) {
      std::int64_t flat = 0;
      for (int a = 0; a < d; ++a) {
        flat = flat * n + jq[static_cast<size_t>(a)] * sf;
        z(d + a) = dual.coord(jq[static_cast<size_t>(a)] * sf);
      }
      visit(z, spec.samples(flat));
      for (int a = d - 1; a >= 0; --a) {
        if (++jq[static_cast<size_t>(a)] < pg.freq_count()) break;
        jq[static_cast<size_t>(a)] = 0;
      }
    }
    for (int a = d - 1; a >= 0; --a) {
      if (++q[static_cast<size_t>(a)] < pg.pos_count()) break;
      q[static_cast<size_t>(a)] = 0;
    }
  }
}

Cplx stft_point(const DiscreteSignal& f, const DiscreteSignal& g, const Vec& z) {
  const GridSpec& grid = f.grid;
  const int d = grid.d();
  const Vec x = z.head(d);
  const Vec xi = z.tail(d);
  std::vector<int> mshift;
  CVec tg;
  if (index_offsets(grid, x, mshift)) {
    tg = circular_translate(g.samples, d, grid.n(), mshift);
  } else {
    Vec zx = Vec::Zero(2 * d);
    zx.head(d) = x;
    tg = tf_shift(g, zx, /*interpolate=*/true).samples;
  }
  CVec prod = f.samples.cwiseProduct(tg.conjugate());
  const auto tables = phase_tables(grid, xi, -1.0);
  apply_phase(prod, tables, d, grid.n());
  return std::pow(grid.h(), d) * prod.sum();
}

}  // namespace

DiscreteSignal tf_shift(const DiscreteSignal& f, const Vec& z, bool interpolate) {
  validate_signal(f, "tf_shift");
  const GridSpec& grid = f.grid;
  const int d = grid.d();
  if (z.size() != 2 * d) throw ValidationError("tf_shift: z must have 2d components");
  const Vec x = z.head(d);
  const Vec xi = z.tail(d);
  std::vector<int> mshift;
  CVec shifted;
  if (index_offsets(grid, x, mshift)) {
    shifted = circular_translate(f.samples, d, grid.n(), mshift);
  } else if (!interpolate) {
    throw ValidationError("tf_shift: position is off-grid; pass interpolate=true");
  } else {
    DiscreteSignal spec = fourier(f);
    const auto ramp = phase_tables(spec.grid, x, -1.0);
    apply_phase(spec.samples, ramp, d, grid.n());
    shifted = inverse_fourier(spec).samples;
  }
  const auto mod = phase_tables(grid, xi, 1.0);
  apply_phase(shifted, mod, d, grid.n());
  return {grid, std::move(shifted)};
}

PhaseField stft(const DiscreteSignal& f, const DiscreteSignal& g, const PhaseGrid& pg) {
  validate_signal(f, "stft");
  validate_signal(g, "stft");
  validate_same_grid(f, g, "stft");
  CVec values(pg.count());
  if (pg.is_lattice()) {
    require_aligned(pg, f.grid, "stft");
    std::int64_t i = 0;
    stream_stft_lattice(f, g, pg, [&](const Vec&, Cplx v) { values(i++) = v; });
  } else {
    for (std::int64_t i = 0; i < pg.count(); ++i) values(i) = stft_point(f, g, pg.point(i));
  }
  return {pg, std::move(values)};
}

PhaseField wigner(const DiscreteSignal& f, const DiscreteSignal& g, const PhaseGrid& pg) {
  validate_signal(f, "wigner");
  validate_signal(g, "wigner");
  validate_same_grid(f, g, "wigner");
  const GridSpec& grid = f.grid;
  const int d = grid.d();
  const int n = grid.n();
  const int n2 = 2 * n;
  const DiscreteSignal ff = refine2(f);
  const DiscreteSignal gg = refine2(g);

  // Integrand row at the grid position with absolute index p:
  // row[m] = f(x_p + y_m/2) conj(g(x_p - y_m/2)); on the twice finer grid the
  // two arguments sit at fine indices 2p + m - n/2 and 2p - m + n/2.
  std::vector<int> idx(static_cast<size_t>(d), 0);
  auto fill_row = [&](const std::vector<int>& pabs, CVec& row) {
    row.resize(grid.size());
    std::fill(idx.begin(), idx.end(), 0);
    for (std::int64_t flat = 0; flat < row.size(); ++flat) {
      std::int64_t fsrc = 0, gsrc = 0;
      for (int a = 0; a < d; ++a) {
        const int m = idx[static_cast<size_t>(a)];
        const int p2 = 2 * pabs[static_cast<size_t>(a)];
        fsrc = fsrc * n2 + wrap(p2 + m - n / 2, n2);
        gsrc = gsrc * n2 + wrap(p2 - m + n / 2, n2);
      }
      row(flat) = ff.samples(fsrc) * std::conj(gg.samples(gsrc));
      for (int a = d - 1; a >= 0; --a) {
        if (++idx[static_cast<size_t>(a)] < n) break;
        idx[static_cast<size_t>(a)] = 0;
      }
    }
  };

  CVec values(pg.count());
  CVec row;
  if (pg.is_lattice()) {
    require_aligned(pg, grid, "wigner");
    const int sp = pg.pos_stride();
    const int sf = pg.freq_stride();
    const std::int64_t rows = ipow(pg.pos_count(), d);
    const std::int64_t cols = ipow(pg.freq_count(), d);
    std::vector<int> q(static_cast<size_t>(d), 0), pabs(static_cast<size_t>(d));
    for (std::int64_t r = 0; r < rows; ++r) {
      for (int a = 0; a < d; ++a) pabs[static_cast<size_t>(a)] = q[static_cast<size_t>(a)] * sp;
      fill_row(pabs, row);
      const DiscreteSignal spec = fourier({grid, row});
      std::vector<int> jq(static_cast<size_t>(d), 0);
      for (std::int64_t col = 0; col < cols; ++col) {
        std::int64_t flat = 0;
        for (int a = 0; a < d; ++a) flat = flat * n + jq[static_cast<size_t>(a)] * sf;
        values(r * cols + col) = spec.samples(flat);
        for (int a = d - 1; a >= 0; --a) {
          if (++jq[static_cast<size_t>(a)] < pg.freq_count()) break;
          jq[static_cast<size_t>(a)] = 0;
        }
      }
      for (int a = d - 1; a >= 0; --a) {
        if (++q[static_cast<size_t>(a)] < pg.pos_count()) break;
        q[static_cast<size_t>(a)] = 0;
      }
    }
  } else {
    std::vector<int> pabs(static_cast<size_t>(d));
    for (std::int64_t i = 0; i < pg.count(); ++i) {
      const Vec z = pg.point(i);
      for (int a = 0; a < d; ++a) {
        const double t = (z(a) + grid.half_width()) / grid.h();
        const auto m = std::llround(t);
        if (std::abs(t - static_cast<double>(m)) > kOnGridTol * std::max(1.0, std::abs(t)) ||
            m < 0 || m >= n)
          throw ValidationError("wigner: point positions must lie on the signal grid");
        pabs[static_cast<size_t>(a)] = static_cast<int>(m);
      }
      fill_row(pabs, row);
      const auto tables = phase_tables(grid, z.tail(d), -1.0);
      apply_phase(row, tables, d, n);
      values(i) = std::pow(grid.h(), d) * row.sum();
    }
  }
  return {pg, std::move(values)};
}

double moyal_check(const DiscreteSignal& f1, const DiscreteSignal& g1, const DiscreteSignal& f2,
                   const DiscreteSignal& g2) {
  validate_signal(f1, "moyal_check");
  validate_same_grid(f1, g1, "moyal_check");
  validate_same_grid(f1, f2, "moyal_check");
  validate_same_grid(f1, g2, "moyal_check");
  const GridSpec& grid = f1.grid;
  const int d = grid.d();
  const int n = grid.n();
  std::vector<int> q(static_cast<size_t>(d), 0);
  CVec prod1, prod2;
  Cplx acc = 0.0;
  const std::int64_t rows = grid.size();
  for (std::int64_t r = 0; r < rows; ++r) {
    window_product_row(f1.samples, g1.samples, d, n, q, prod1);
    window_product_row(f2.samples, g2.samples, d, n, q, prod2);
    const DiscreteSignal s1 = fourier({grid, prod1});
    const DiscreteSignal s2 = fourier({grid, prod2});
    acc += s2.samples.dot(s1.samples);  // sum of s1 conj(s2)
    for (int a = d - 1; a >= 0; --a) {
      if (++q[static_cast<size_t>(a)] < n) break;
      q[static_cast<size_t>(a)] = 0;
    }
  }
  const double w = std::pow(grid.h() * grid.freq_step(), d);
  const Cplx target = inner(f1, f2) * std::conj(inner(g1, g2));
  return std::abs(w * acc - target);
}

double field_lp_norm(const PhaseField& field, double p, double s, LatticeWeighting weighting) {
  const bool infp = std::isinf(p);
  if (!infp && !(p >= 1.0)) throw ValidationError("field_lp_norm: p must lie in [1, infinity]");
  if (field.values.size() != field.grid.count())
    throw ValidationError("field_lp_norm: value count does not match the grid");
  if (infp) {
    double sup = 0.0;
    for (std::int64_t i = 0; i < field.values.size(); ++i) {
      const double vs = std::pow(1.0 + field.grid.point(i).norm(), s);
      sup = std::max(sup, std::abs(field.values(i)) * vs);
    }
    return sup;
  }
  double w;
  switch (weighting) {
    case LatticeWeighting::quadrature: w = field.grid.weight(); break;
    case LatticeWeighting::normalized: w = 1.0 / static_cast<double>(field.grid.count()); break;
    default: w = 1.0; break;
  }
  double acc = 0.0;
  for (std::int64_t i = 0; i < field.values.size(); ++i) {
    const double vs = std::pow(1.0 + field.grid.point(i).norm(), s);
    acc += std::pow(std::abs(field.values(i)) * vs, p);
  }
  return std::pow(w * acc, 1.0 / p);
}

double modulation_norm(const DiscreteSignal& f, const DiscreteSignal& g, double p, double s,
                       const PhaseGrid& pg) {
  validate_signal(f, "modulation_norm");
  validate_signal(g, "modulation_norm");
  validate_same_grid(f, g, "modulation_norm");
  if (!pg.is_lattice())
    throw ValidationError("modulation_norm: phase grid must be a lattice");
  require_aligned(pg, f.grid, "modulation_norm");
  const bool infp = std::isinf(p);
  if (!infp && !(p >= 1.0)) throw ValidationError("modulation_norm: p must lie in [1, infinity]");
  double acc = 0.0;
  stream_stft_lattice(f, g, pg, [&](const Vec& z, Cplx v) {
    const double vs = std::pow(1.0 + z.norm(), s);
    const double m = std::abs(v) * vs;
    if (infp)
      acc = std::max(acc, m);
    else
      acc += std::pow(m, p);
  });
  return infp ? acc : std::pow(pg.weight() * acc, 1.0 / p);
}

double modulation_norm(const DiscreteSignal& f, const DiscreteSignal& g, double p, double s) {
  return modulation_norm(f, g, p, s, PhaseGrid::lattice(f.grid));
}

double cone_norm(const DiscreteSignal& f, const DiscreteSignal& g, const ConeSpec& cone, double p,
                 const PhaseGrid& pg, bool* empty_warning) {
  validate_signal(f, "cone_norm");
  validate_signal(g, "cone_norm");
  validate_same_grid(f, g, "cone_norm");
  if (!pg.is_lattice()) throw ValidationError("cone_norm: phase grid must be a lattice");
  require_aligned(pg, f.grid, "cone_norm");
  const bool infp = std::isinf(p);
  if (!infp && !(p >= 1.0)) throw ValidationError("cone_norm: p must lie in [1, infinity]");
  double acc = 0.0;
  std::int64_t members = 0;
  stream_stft_lattice(f, g, pg, [&](const Vec& z, Cplx v) {
    if (!cone.contains(z)) return;
    ++members;
    const double m = std::abs(v);
    if (infp)
      acc = std::max(acc, m);
    else
      acc += std::pow(m, p);
  });
  if (empty_warning) *empty_warning = (members == 0);
  if (members == 0) return 0.0;
  return infp ? acc : std::pow(pg.weight() * acc, 1.0 / p);
}

double cone_norm(const DiscreteSignal& f, const DiscreteSignal& g, const ConeSpec& cone, double p,
                 bool* empty_warning) {
  return cone_norm(f, g, cone, p, PhaseGrid::lattice(f.grid), empty_warning);
}

}  // namespace mgabor
