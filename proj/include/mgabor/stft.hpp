#pragma once

#include "mgabor/grid.hpp"
#include "mgabor/phase.hpp"

namespace mgabor {

/// Time-frequency shift pi(z) f = e^{2 pi i y.xi} f(y - x) for z = (x, xi).
/// Translation is circular on the periodized grid. The position part must lie
/// on the grid unless interpolate is set, in which case the translation is
/// carried out band-limitedly through the frequency domain. On-grid shifts
/// preserve the discrete L^2 norm exactly.
DiscreteSignal tf_shift(const DiscreteSignal& f, const Vec& z, bool interpolate = false);

/// Short-time Fourier transform V_g f(z) = <f, pi(z) g>, sampled on pg.
/// Lattice grids use one FFT per position row; explicit point lists use
/// direct quadrature (with band-limited window translation if the position
/// part is off-grid).
PhaseField stft(const DiscreteSignal& f, const DiscreteSignal& g, const PhaseGrid& pg);

/// Cross-Wigner distribution W(f,g)(x,xi) = int f(x+y/2) conj(g(x-y/2))
/// e^{-2 pi i y.xi} dy, sampled on pg. Both signals are refined to a twice
/// finer grid so the half-shifted products land on sample points.
PhaseField wigner(const DiscreteSignal& f, const DiscreteSignal& g, const PhaseGrid& pg);

/// Absolute defect |<V_{g1}f1, V_{g2}f2> - <f1,f2> conj(<g1,g2>)| with the
/// pairing taken over the full aligned phase-space lattice.
double moyal_check(const DiscreteSignal& f1, const DiscreteSignal& g1, const DiscreteSignal& f2,
                   const DiscreteSignal& g2);

/// How lattice sums are weighted in L^p accumulation.
enum class LatticeWeighting {
  quadrature,  // product of lattice step sizes (default)
  normalized,  // quadrature weights scaled to total mass one
  counting     // weight one per point
};

/// Weighted L^p norm of a sampled phase-space field with polynomial weight
/// v_s(z) = (1 + |z|)^s. p = infinity takes the weighted sup (no lattice
/// weights); finite p needs a lattice grid for its quadrature weights unless
/// counting weights are requested.
double field_lp_norm(const PhaseField& field, double p, double s,
                     LatticeWeighting weighting = LatticeWeighting::quadrature);

/// Modulation-space norm ||V_g f . v_s||_{L^p} over an aligned lattice. The
/// two-argument overload uses the full lattice of the signal grid. Rows are
/// streamed, so large lattices never materialize.
double modulation_norm(const DiscreteSignal& f, const DiscreteSignal& g, double p, double s,
                       const PhaseGrid& pg);
double modulation_norm(const DiscreteSignal& f, const DiscreteSignal& g, double p, double s);

/// Same norm restricted to the lattice points inside a cone. If no lattice
/// point lies inside, returns 0 and sets *empty_warning (when given).
double cone_norm(const DiscreteSignal& f, const DiscreteSignal& g, const ConeSpec& cone, double p,
                 const PhaseGrid& pg, bool* empty_warning = nullptr);
double cone_norm(const DiscreteSignal& f, const DiscreteSignal& g, const ConeSpec& cone, double p,
                 bool* empty_warning = nullptr);

}  // namespace mgabor
