#pragma once

#include "mgabor/grid.hpp"
#include "mgabor/symplectic.hpp"

namespace mgabor {

/// Pointwise multiplication by the chirp e^{i pi y.Cy}; c must be symmetric.
DiscreteSignal apply_chirp(const Mat& c, const DiscreteSignal& f);

/// Dilation |det a|^{-1/2} f(a^{-1} x) by band-limited resampling, optionally
/// onto a different output grid. Values whose preimage a^{-1}x falls outside
/// the source domain are zero (the signal is assumed to have decayed there);
/// if samples above 1e-6 of the peak would map outside the output grid, the
/// dilation cannot be represented and a ComputationError asks for a larger
/// half-width.
DiscreteSignal apply_scaling(const Mat& a, const DiscreteSignal& f,
                             const GridSpec* out_grid = nullptr);

/// Metaplectic operator mu(S) realized through the chirp/Fourier/dilation
/// factorization of S, with the Euler (rotation-dilation-rotation) form
/// cached for phase-space envelope predictions.
class MetaplecticOperator {
public:
  explicit MetaplecticOperator(SymplecticMatrix s, double tol = kDefaultTol)
      : s_(std::move(s)), factors_(free_factorization(s_, tol)), euler_(euler_decompose(s_, tol)) {}

  const SymplecticMatrix& s() const { return s_; }
  const GeneratorFactorization& factors() const { return factors_; }
  const EulerDecomposition& euler() const { return euler_; }
  int dim() const { return s_.dim(); }

private:
  SymplecticMatrix s_;
  GeneratorFactorization factors_;
  EulerDecomposition euler_;
};

/// Applies mu(S) as the factor chain (rightmost factor first)
///   [chirp(-lambda I)] -> F -> chirp(pre) -> F -> dilation -> chirp(post),
/// where the bracketed factor and the first F appear only when the
/// factorization needed the two-transform branch. The result lives on f's
/// grid. Defined up to a global unimodular phase.
DiscreteSignal apply_metaplectic(const MetaplecticOperator& op, const DiscreteSignal& f);

/// Slow reference realization of mu(S): direct quadrature of the quadratic
/// kernel |det B|^{-1/2} e^{i pi (x.DB^{-1}x - 2 y.B^{-1}x + y.B^{-1}Ay)}
/// (with one explicit chirp+transform prefactor when B is singular). The
/// quadrature is oversampled automatically until the kernel's frequency sweep
/// fits under the refined Nyquist rate, so it stays trustworthy for
/// contracting blocks. O(r n^{2d}); intended for cross-checks, not production.
DiscreteSignal metaplectic_oracle(const SymplecticMatrix& s, const DiscreteSignal& f);

/// Schroedinger evolution U(t): Fourier multiplier e^{-2 pi i t |xi|^2}.
/// Exactly unitary on the grid; equals mu(S_t) up to a global phase.
DiscreteSignal free_propagator(double t, const DiscreteSignal& f);

}  // namespace mgabor
