#pragma once

#include <functional>
#include <optional>
#include <string>

#include "mgabor/phase.hpp"
#include "mgabor/symplectic.hpp"
#include "mgabor/weyl.hpp"

namespace mgabor {

/// Type-erased operator on discrete signals. `s` is set when the operator
/// shadows a linear phase-space map (used to locate the expected Gabor-matrix
/// concentration at w = Sz); `norm_bound` is an operator-norm bound when one
/// is known (1 for the unitary handles), used for sanity checks downstream.
struct OperatorHandle {
  std::string description;
  std::optional<SymplecticMatrix> s;
  std::optional<double> norm_bound;
  std::function<DiscreteSignal(const DiscreteSignal&)> apply;
};

OperatorHandle identity_handle(int d);
OperatorHandle metaplectic_handle(const SymplecticMatrix& s);
OperatorHandle free_propagator_handle(double t, int d);

/// Handle for f -> aʷ(μ(S) f), a Weyl symbol composed with a metaplectic
/// operator. No norm bound is attached (the symbol may be unbounded).
OperatorHandle generalized_metaplectic(const WeylSymbol& a, const SymplecticMatrix& s);

/// Samples K(w, z) = <A π(z) g, π(w) γ> of an operator's Gabor matrix.
struct GaborMatrixSamples {
  std::string op_description;
  std::string g_id;      // source window id, informational
  std::string gamma_id;  // analysis window id, informational
  PhaseGrid ws;
  PhaseGrid zs;
  CMat values;  // ws.count() x zs.count()
};

/// One operator application plus one STFT per source point z. Throws
/// ComputationError when a sample exceeds the handle's norm bound times
/// ‖g‖‖γ‖ (an impossible value for a correctly applied operator).
GaborMatrixSamples gabor_matrix(const OperatorHandle& op, const DiscreteSignal& g,
                                const DiscreteSignal& gamma, const PhaseGrid& ws,
                                const PhaseGrid& zs, const std::string& g_id = "",
                                const std::string& gamma_id = "");

}  // namespace mgabor
