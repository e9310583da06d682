#include "mgabor/gabor.hpp"

#include <utility>

#include "mgabor/metaplectic.hpp"
#include "mgabor/stft.hpp"

namespace mgabor {

OperatorHandle identity_handle(int d) {
  OperatorHandle h;
  h.description = "identity";
  h.s = SymplecticMatrix(Mat::Identity(2 * d, 2 * d));
  h.norm_bound = 1.0;
  h.apply = [](const DiscreteSignal& f) { return f; };
  return h;
}

OperatorHandle metaplectic_handle(const SymplecticMatrix& s) {
  OperatorHandle h;
  h.description = "metaplectic";
  h.s = s;
  h.norm_bound = 1.0;
  h.apply = [op = MetaplecticOperator(s)](const DiscreteSignal& f) {
    return apply_metaplectic(op, f);
  };
  return h;
}

OperatorHandle free_propagator_handle(double t, int d) {
  OperatorHandle h;
  h.description = "free-particle t=" + std::to_string(t);
  h.s = free_particle_flow(t, d);
  h.norm_bound = 1.0;
  h.apply = [t](const DiscreteSignal& f) { return free_propagator(t, f); };
  return h;
}

OperatorHandle generalized_metaplectic(const WeylSymbol& a, const SymplecticMatrix& s) {
  OperatorHandle h;
  h.description = "generalized-metaplectic";
  h.s = s;
  h.apply = [a, op = MetaplecticOperator(s)](const DiscreteSignal& f) {
    return weyl_apply(a, apply_metaplectic(op, f));
  };
  return h;
}

GaborMatrixSamples gabor_matrix(const OperatorHandle& op, const DiscreteSignal& g,
                                const DiscreteSignal& gamma, const PhaseGrid& ws,
                                const PhaseGrid& zs, const std::string& g_id,
                                const std::string& gamma_id) {
  validate_same_grid(g, gamma, "gabor_matrix");
  if (!op.apply) throw ValidationError("gabor_matrix: operator handle has no applicator");
  const double ng = l2_norm(g);
  const double ngamma = l2_norm(gamma);
  if (ng == 0.0 || ngamma == 0.0)
    throw ValidationError("gabor_matrix: windows must be nonzero");

  CMat k(ws.count(), zs.count());
  for (std::int64_t zi = 0; zi < zs.count(); ++zi) {
    const DiscreteSignal shifted = tf_shift(g, zs.point(zi), true);
    const DiscreteSignal moved = op.apply(shifted);
    k.col(zi) = stft(moved, gamma, ws).values;
  }

  if (op.norm_bound) {
    const double cap = *op.norm_bound * ng * ngamma * (1.0 + 1e-6);
    if (k.cwiseAbs().maxCoeff() > cap)
      throw ComputationError(
          "gabor_matrix: sample exceeds the operator-norm bound; the operator or "
          "grid is misconfigured");
  }
  return {op.description, g_id, gamma_id, ws, zs, std::move(k)};
}

}  // namespace mgabor
