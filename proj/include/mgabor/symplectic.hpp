#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mgabor/errors.hpp"
#include "mgabor/rng.hpp"
#include "mgabor/types.hpp"

namespace mgabor {

/// Canonical symplectic form J = [[O, I], [-I, O]] of size 2d x 2d.
Mat standard_j(int d);

/// Max-entry residual of M^T J M = J. Throws ValidationError unless m is
/// square with even positive size.
template <typename Derived>
double symplectic_residual(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols() || m.rows() <= 0 || m.rows() % 2 != 0)
    throw ValidationError("symplectic_residual: matrix must be square with even size");
  const Mat s = m.derived().template cast<double>();
  const Mat j = standard_j(static_cast<int>(s.rows() / 2));
  return (s.transpose() * j * s - j).cwiseAbs().maxCoeff();
}

/// Max-entry residual of M^T M = I.
template <typename Derived>
double orthogonality_residual(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols() || m.rows() <= 0)
    throw ValidationError("orthogonality_residual: matrix must be square");
  const Mat s = m.derived().template cast<double>();
  return (s.transpose() * s - Mat::Identity(s.rows(), s.cols())).cwiseAbs().maxCoeff();
}

/// Residual against U(2d, R) = Sp(d, R) ∩ O(2d): worse of the symplectic and
/// orthogonality residuals.
template <typename Derived>
double rotation_residual(const Eigen::MatrixBase<Derived>& m) {
  return std::max(symplectic_residual(m), orthogonality_residual(m));
}

template <typename Derived>
bool is_symplectic(const Eigen::MatrixBase<Derived>& m, double tol = kDefaultTol) {
  return symplectic_residual(m) <= tol;
}

template <typename Derived>
bool is_symplectic_rotation(const Eigen::MatrixBase<Derived>& m, double tol = kDefaultTol) {
  return rotation_residual(m) <= tol;
}

/// A 2d x 2d real matrix validated against S^T J S = J at construction.
class SymplecticMatrix {
public:
  explicit SymplecticMatrix(Mat m, double tol = kDefaultTol);

  const Mat& matrix() const { return m_; }
  int dim() const { return d_; }

  // Blocks of S = [[A, B], [C, D]], each d x d.
  Mat a() const { return m_.topLeftCorner(d_, d_); }
  Mat b() const { return m_.topRightCorner(d_, d_); }
  Mat c() const { return m_.bottomLeftCorner(d_, d_); }
  Mat dblock() const { return m_.bottomRightCorner(d_, d_); }

  /// S^{-1} = J^T S^T J, exact for symplectic S (no linear solve involved).
  SymplecticMatrix inverse() const;

private:
  Mat m_;
  int d_ = 0;
};

/// Diagonal dilations associated with singular values sigma (descending, >= 1):
/// d = Sigma ⊕ Sigma^{-1}, d_prime = Sigma^{-1} ⊕ I, d_second = I ⊕ Sigma^{-1}.
struct DilationMatrices {
  Mat d;
  Mat d_prime;
  Mat d_second;
};

DilationMatrices dilation_matrices(const Vec& sigma);

/// S = U^T D V with U, V symplectic rotations and D = Sigma ⊕ Sigma^{-1}.
struct EulerDecomposition {
  Mat u;
  Mat v;
  Vec sigma;  // descending, all >= 1

  int dim() const { return static_cast<int>(sigma.size()); }
  Mat d_matrix() const { return dilation_matrices(sigma).d; }
  Mat d_prime() const { return dilation_matrices(sigma).d_prime; }
  Mat d_second() const { return dilation_matrices(sigma).d_second; }
  double det_sigma() const { return sigma.prod(); }
  Mat reconstruct() const { return u.transpose() * d_matrix() * v; }
};

/// Euler ("symplectic SVD") decomposition via the J-paired eigenstructure of
/// S S^T. Throws DecompositionError when the result fails its residual checks.
EulerDecomposition euler_decompose(const SymplecticMatrix& s, double tol_recon = kDefaultTol);

/// Builds [[A, -B], [B, A]] from the real/imaginary parts of a unitary A + iB.
/// Throws ValidationError if A + iB is not unitary within tol.
SymplecticMatrix rotation_from_unitary(const Mat& a, const Mat& b, double tol = kDefaultTol);

/// Free-particle flow S_t = [[I, 2tI], [O, I]].
SymplecticMatrix free_particle_flow(double t, int d);

/// Top singular value of the free-particle flow: sigma(t) = sqrt(1+t^2) + |t|.
double free_particle_sigma(double t);

/// Closed-form Euler factors of the free-particle flow. For t >= 0:
///   U_t = c [[sI, I], [-I, sI]],  V_t = c [[I, sI], [-sI, I]],
/// with s = sigma(t), c = (1+s^2)^{-1/2}; for t < 0 both factors are
/// conjugated by the frequency reflection diag(I, -I).
EulerDecomposition free_particle_euler(double t, int d);

/// Haar-like random symplectic rotation (uniform over U(2d, R) up to the
/// phase-fix convention of the underlying complex QR draw).
SymplecticMatrix random_symplectic_rotation(Rng& rng, int d);

/// S = U^T D V with Haar-like random rotations U, V and sigma drawn
/// log-uniformly in [1, sigma_max], sorted descending. Deterministic in seed.
/// If sigma_out is non-null it receives the drawn sigma vector.
SymplecticMatrix random_symplectic(std::uint64_t seed, int d, double sigma_max,
                                   Vec* sigma_out = nullptr);

/// Chirp generator matrix [[I, O], [C, I]] for symmetric C.
Mat chirp_matrix(const Mat& c);

/// Scaling generator matrix [[M, O], [O, M^{-T}]] for invertible M.
Mat scaling_matrix(const Mat& m);

/// Factorization of a symplectic matrix into chirp/scaling/Fourier generators.
/// ft_count == 1: S = C(post_chirp) · Scale(scaling) · J · C(pre_chirp).
/// ft_count == 2: S = C(post_chirp) · Scale(scaling) · J · C(pre_chirp) · J · C(-lambda I).
struct GeneratorFactorization {
  double lambda = 0.0;  // 0 on the direct branch
  Mat pre_chirp;        // symmetric d x d
  Mat post_chirp;       // symmetric d x d
  Mat scaling;          // invertible d x d
  int ft_count = 1;     // number of Fourier factors (1 or 2)

  int dim() const { return static_cast<int>(scaling.rows()); }
};

/// Product of the factor matrices of f (see GeneratorFactorization).
Mat recompose_factorization(const GeneratorFactorization& f);

/// Computes a GeneratorFactorization of s. Uses the direct branch when the
/// B block is invertible (smallest singular value >= 1e-6 of the largest);
/// otherwise searches lambda in {±2^{-k}: k = 20..0}, smallest |lambda| first
/// (+ before -), for an invertible A + lambda B. Throws FactorizationError
/// when no lambda qualifies or the recomposition misses tol_recon.
GeneratorFactorization free_factorization(const SymplecticMatrix& s,
                                          double tol_recon = kDefaultTol);

}  // namespace mgabor
