#pragma once

#include <functional>

#include "mgabor/phase.hpp"
#include "mgabor/symplectic.hpp"

namespace mgabor {

/// A symbol sampled on the full phase-space lattice of a signal grid
/// (positions on the grid, frequencies on its dual, both at stride 1).
/// `evaluator` optionally carries the analytic function behind the samples,
/// so checks can resample the symbol at mapped phase-space points; tabulated
/// symbols leave it empty.
struct WeylSymbol {
  PhaseGrid grid;
  CVec values;
  std::function<Cplx(const Vec&)> evaluator;
};

/// Samples fn on the full phase lattice of `grid` and keeps fn as evaluator.
WeylSymbol symbol_from_function(const GridSpec& grid, std::function<Cplx(const Vec&)> fn);

/// Integral operator with kernel k(x, y) = ∫ a((x+y)/2, ξ) e^{2πi(x−y)·ξ} dξ,
/// realized by band-limited refinement of the symbol onto half-step midpoints
/// and a DFT over the frequency axes. Real symbols give self-adjoint
/// operators. Throws ValidationError for strided or mismatched lattices and
/// for grids whose midpoint refinement would not fit in memory.
DiscreteSignal weyl_apply(const WeylSymbol& a, const DiscreteSignal& f);

/// Relative L² gap between the STFT moduli of (a∘S)ʷ f and μ(S)⁻¹ aʷ μ(S) f
/// (moduli, so the unitary's undetermined global phase drops out). Requires
/// a.evaluator to sample the composed symbol.
double symplectic_covariance_check(const SymplecticMatrix& s, const WeylSymbol& a,
                                   const DiscreteSignal& f);

}  // namespace mgabor
