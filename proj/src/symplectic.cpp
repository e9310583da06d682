#include "mgabor/symplectic.hpp"

#include <cmath>
#include <functional>
#include <utility>

namespace mgabor {

namespace {

std::string fmt(double x) { return std::to_string(x); }

// Smallest and largest singular values.
std::pair<double, double> singular_extremes(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  const Vec& sv = svd.singularValues();
  return {sv(sv.size() - 1), sv(0)};
}

Mat symmetrize(const Mat& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

Mat standard_j(int d) {
  if (d < 1) throw ValidationError("standard_j: d must be >= 1");
  Mat j = Mat::Zero(2 * d, 2 * d);
  j.topRightCorner(d, d).setIdentity();
  j.bottomLeftCorner(d, d) = -Mat::Identity(d, d);
  return j;
}

SymplecticMatrix::SymplecticMatrix(Mat m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() <= 0 || m_.rows() % 2 != 0)
    throw ValidationError("SymplecticMatrix: matrix must be square with even size");
  if (!m_.allFinite()) throw ValidationError("SymplecticMatrix: entries must be finite");
  d_ = static_cast<int>(m_.rows() / 2);
  const double res = symplectic_residual(m_);
  if (res > tol)
    throw ValidationError("SymplecticMatrix: symplectic residual " + fmt(res) +
                          " exceeds tolerance " + fmt(tol));
}

SymplecticMatrix SymplecticMatrix::inverse() const {
  const Mat j = standard_j(d_);
  // Inverse residual scales like cond(S)^2 times the input residual, so
  // accept a looser construction tolerance than the default.
  return SymplecticMatrix(j.transpose() * m_.transpose() * j, 1e-6);
}

DilationMatrices dilation_matrices(const Vec& sigma) {
  const int d = static_cast<int>(sigma.size());
  if (d < 1) throw ValidationError("dilation_matrices: sigma must be nonempty");
  for (int i = 0; i < d; ++i) {
    if (!(sigma(i) >= 1.0 - 1e-12))
      throw ValidationError("dilation_matrices: sigma entries must be >= 1, got " + fmt(sigma(i)));
    if (i > 0 && sigma(i) > sigma(i - 1) + 1e-12)
      throw ValidationError("dilation_matrices: sigma must be descending");
  }
  DilationMatrices out;
  out.d = Mat::Zero(2 * d, 2 * d);
  out.d_prime = Mat::Zero(2 * d, 2 * d);
  out.d_second = Mat::Zero(2 * d, 2 * d);
  for (int i = 0; i < d; ++i) {
    out.d(i, i) = sigma(i);
    out.d(d + i, d + i) = 1.0 / sigma(i);
    out.d_prime(i, i) = 1.0 / sigma(i);
    out.d_prime(d + i, d + i) = 1.0;
    out.d_second(i, i) = 1.0;
    out.d_second(d + i, d + i) = 1.0 / sigma(i);
  }
  return out;
}

EulerDecomposition euler_decompose(const SymplecticMatrix& s, double tol_recon) {
  const int d = s.dim();
  const Mat& S = s.matrix();
  const Mat J = standard_j(d);
  Mat P = S * S.transpose();
  P = symmetrize(P);

  Eigen::SelfAdjointEigenSolver<Mat> es(P);
  if (es.info() != Eigen::Success)
    throw ComputationError("euler_decompose: eigensolver did not converge");
  const Vec lam = es.eigenvalues();   // ascending
  const Mat evec = es.eigenvectors(); // orthonormal columns

  // Eigenvalues of P come in exact reciprocal pairs (lambda, 1/lambda), with
  // J mapping one eigenspace onto the other. Pick the d eigenvectors on the
  // lambda >= 1 side and synthesize their partners as -J q, which pins the
  // pairing a generic eigensolver would scramble.
  constexpr double kOneClusterTol = 1e-8;
  std::vector<int> upper;
  std::vector<int> one_cluster;
  for (int i = 2 * d - 1; i >= 0; --i) {
    if (std::abs(lam(i) - 1.0) <= kOneClusterTol)
      one_cluster.push_back(i);
    else if (lam(i) > 1.0)
      upper.push_back(i);  // descending lambda
  }

  std::vector<Vec> qs;
  qs.reserve(d);
  for (int i : upper) qs.push_back(evec.col(i));

  // The |lambda - 1| <= tol cluster is a J-invariant even-dimensional space
  // holding both members of each pair; choose q, force the partner -J q,
  // deflate both directions, repeat.
  if (!one_cluster.empty()) {
    Mat w(2 * d, static_cast<int>(one_cluster.size()));
    for (int c = 0; c < w.cols(); ++c) w.col(c) = evec.col(one_cluster[static_cast<size_t>(c)]);
    while (w.cols() >= 2) {
      int piv = 0;
      w.colwise().norm().maxCoeff(&piv);
      const Vec q = w.col(piv).normalized();
      const Vec p = -(J * q);
      qs.push_back(q);
      Mat deflated = w;
      for (int c = 0; c < deflated.cols(); ++c)
        deflated.col(c) -= q * q.dot(w.col(c)) + p * p.dot(w.col(c));
      const int keep = static_cast<int>(w.cols()) - 2;
      if (keep == 0) break;
      Eigen::ColPivHouseholderQR<Mat> qr(deflated);
      w = qr.householderQ() * Mat::Identity(2 * d, keep);
    }
  }

  if (static_cast<int>(qs.size()) != d)
    throw DecompositionError(
        "euler_decompose: eigenvalue pairing produced " + std::to_string(qs.size()) +
            " directions instead of " + std::to_string(d),
        0.0);

  // Near lambda = 1 the solver can mix an eigenvector with its reciprocal
  // partner; span{q, -Jq} is still invariant there, so re-diagonalize the
  // 2x2 Rayleigh block and keep the expanding direction.
  constexpr double kRefineBelow = 1.001;
  for (Vec& q : qs) {
    if (q.dot(P * q) >= kRefineBelow) continue;
    const Vec p = -(J * q);
    const double a11 = q.dot(P * q);
    const double a12 = q.dot(P * p);
    const double a22 = p.dot(P * p);
    const double theta = 0.5 * std::atan2(2.0 * a12, a11 - a22);
    const Vec q1 = (std::cos(theta) * q + std::sin(theta) * p).normalized();
    const Vec q2 = (-std::sin(theta) * q + std::cos(theta) * p).normalized();
    q = (q1.dot(P * q1) >= q2.dot(P * q2)) ? q1 : q2;
  }

  // sigma from Rayleigh quotients (more accurate than solver eigenvalues in
  // clustered cases), clamped to the lambda >= 1 branch, sorted descending.
  std::vector<std::pair<double, int>> order(qs.size());
  for (size_t i = 0; i < qs.size(); ++i)
    order[i] = {std::sqrt(std::max(1.0, qs[i].dot(P * qs[i]))), static_cast<int>(i)};
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });

  Vec sigma(d);
  Mat q_cols(2 * d, 2 * d);
  for (int i = 0; i < d; ++i) {
    sigma(i) = order[static_cast<size_t>(i)].first;
    const Vec& q = qs[static_cast<size_t>(order[static_cast<size_t>(i)].second)];
    q_cols.col(i) = q;
    q_cols.col(d + i) = -(J * q);
  }

  EulerDecomposition dec;
  dec.u = q_cols.transpose();
  dec.sigma = sigma;
  // V := D^{-1} U S makes the reconstruction exact by construction; the
  // meaningful residuals are the rotation checks on U and V.
  Mat v = dec.u * S;
  for (int i = 0; i < d; ++i) {
    v.row(i) /= sigma(i);
    v.row(d + i) *= sigma(i);
  }
  dec.v = v;

  const double res = std::max({rotation_residual(dec.u), rotation_residual(dec.v),
                               (dec.reconstruct() - S).cwiseAbs().maxCoeff()});
  if (!(res <= tol_recon))
    throw DecompositionError("euler_decompose: residual " + fmt(res) + " exceeds tolerance", res);
  return dec;
}

SymplecticMatrix rotation_from_unitary(const Mat& a, const Mat& b, double tol) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows() || a.rows() <= 0)
    throw ValidationError("rotation_from_unitary: a and b must be square of equal size");
  const int d = static_cast<int>(a.rows());
  const Mat eye = Mat::Identity(d, d);
  const double unit_res = std::max((a * a.transpose() + b * b.transpose() - eye).cwiseAbs().maxCoeff(),
                                   (b * a.transpose() - a * b.transpose()).cwiseAbs().maxCoeff());
  if (unit_res > tol)
    throw ValidationError("rotation_from_unitary: A + iB is not unitary (residual " +
                          fmt(unit_res) + ")");
  Mat r(2 * d, 2 * d);
  r.topLeftCorner(d, d) = a;
  r.topRightCorner(d, d) = -b;
  r.bottomLeftCorner(d, d) = b;
  r.bottomRightCorner(d, d) = a;
  return SymplecticMatrix(std::move(r), std::max(tol, kDefaultTol));
}

SymplecticMatrix free_particle_flow(double t, int d) {
  if (d < 1) throw ValidationError("free_particle_flow: d must be >= 1");
  Mat s = Mat::Identity(2 * d, 2 * d);
  s.topRightCorner(d, d) = 2.0 * t * Mat::Identity(d, d);
  return SymplecticMatrix(std::move(s), 1e-14);
}

double free_particle_sigma(double t) { return std::sqrt(1.0 + t * t) + std::abs(t); }

EulerDecomposition free_particle_euler(double t, int d) {
  if (d < 1) throw ValidationError("free_particle_euler: d must be >= 1");
  const double sg = free_particle_sigma(t);
  const double c = 1.0 / std::sqrt(1.0 + sg * sg);
  const Mat eye = Mat::Identity(d, d);

  EulerDecomposition dec;
  dec.sigma = Vec::Constant(d, sg);
  dec.u = Mat(2 * d, 2 * d);
  dec.v = Mat(2 * d, 2 * d);
  dec.u.topLeftCorner(d, d) = c * sg * eye;
  dec.u.topRightCorner(d, d) = c * eye;
  dec.u.bottomLeftCorner(d, d) = -c * eye;
  dec.u.bottomRightCorner(d, d) = c * sg * eye;
  dec.v.topLeftCorner(d, d) = c * eye;
  dec.v.topRightCorner(d, d) = c * sg * eye;
  dec.v.bottomLeftCorner(d, d) = -c * sg * eye;
  dec.v.bottomRightCorner(d, d) = c * eye;

  if (t < 0) {
    // Conjugate both factors by the frequency reflection diag(I, -I), which
    // flips the sign of the off-diagonal blocks.
    dec.u.topRightCorner(d, d) *= -1.0;
    dec.u.bottomLeftCorner(d, d) *= -1.0;
    dec.v.topRightCorner(d, d) *= -1.0;
    dec.v.bottomLeftCorner(d, d) *= -1.0;
  }
  return dec;
}

SymplecticMatrix random_symplectic_rotation(Rng& rng, int d) {
  if (d < 1) throw ValidationError("random_symplectic_rotation: d must be >= 1");
  CMat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.cgauss();
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    const Cplx rjj = r(j, j);
    const double m = std::abs(rjj);
    q.col(j) *= (m > 0) ? rjj / m : Cplx{1.0, 0.0};
  }
  return rotation_from_unitary(q.real(), q.imag());
}

SymplecticMatrix random_symplectic(std::uint64_t seed, int d, double sigma_max, Vec* sigma_out) {
  if (d < 1) throw ValidationError("random_symplectic: d must be >= 1");
  if (!(sigma_max >= 1.0)) throw ValidationError("random_symplectic: sigma_max must be >= 1");
  Rng rng(seed);
  const SymplecticMatrix u = random_symplectic_rotation(rng, d);
  const SymplecticMatrix v = random_symplectic_rotation(rng, d);
  Vec sigma(d);
  const double log_max = std::log(sigma_max);
  for (int i = 0; i < d; ++i) sigma(i) = std::exp(rng.uniform01() * log_max);
  std::sort(sigma.data(), sigma.data() + d, std::greater<double>());
  if (sigma_out) *sigma_out = sigma;
  const Mat s = u.matrix().transpose() * dilation_matrices(sigma).d * v.matrix();
  return SymplecticMatrix(s, 1e-10);
}

Mat chirp_matrix(const Mat& c) {
  if (c.rows() != c.cols() || c.rows() <= 0)
    throw ValidationError("chirp_matrix: c must be square");
  if ((c - c.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + c.cwiseAbs().maxCoeff()))
    throw ValidationError("chirp_matrix: c must be symmetric");
  const int d = static_cast<int>(c.rows());
  Mat m = Mat::Identity(2 * d, 2 * d);
  m.bottomLeftCorner(d, d) = c;
  return m;
}

Mat scaling_matrix(const Mat& m) {
  if (m.rows() != m.cols() || m.rows() <= 0)
    throw ValidationError("scaling_matrix: m must be square");
  const int d = static_cast<int>(m.rows());
  if (!(singular_extremes(m).first > 0.0))
    throw ValidationError("scaling_matrix: m must be invertible");
  Mat out = Mat::Zero(2 * d, 2 * d);
  out.topLeftCorner(d, d) = m;
  out.bottomRightCorner(d, d) = m.inverse().transpose();
  return out;
}

Mat recompose_factorization(const GeneratorFactorization& f) {
  const int d = f.dim();
  const Mat j = standard_j(d);
  Mat s = chirp_matrix(f.post_chirp) * scaling_matrix(f.scaling) * j * chirp_matrix(f.pre_chirp);
  if (f.ft_count == 2) {
    const Mat tail_chirp = -f.lambda * Mat::Identity(d, d);
    s = s * j * chirp_matrix(tail_chirp);
  }
  return s;
}

GeneratorFactorization free_factorization(const SymplecticMatrix& s, double tol_recon) {
  const Mat a = s.a();
  const Mat b = s.b();
  const Mat c = s.c();
  const Mat dd = s.dblock();
  constexpr double kInvertibleRel = 1e-6;

  GeneratorFactorization out;
  const auto [smin_b, smax_b] = singular_extremes(b);
  if (smin_b > 0.0 && smin_b >= kInvertibleRel * smax_b) {
    const Mat binv = b.inverse();
    out.lambda = 0.0;
    out.pre_chirp = symmetrize(binv * a);
    out.post_chirp = symmetrize(dd * binv);
    out.scaling = b;
    out.ft_count = 1;
  } else {
    // S · C(lambda I) · J^{-1} = [[B, -(A+lambda B)], [D, -(C+lambda D)]]
    // is free as soon as A + lambda B is invertible; smallest |lambda| wins.
    double best_smin = smin_b;
    bool found = false;
    for (int k = 20; k >= 0 && !found; --k) {
      for (const double sign : {1.0, -1.0}) {
        const double lambda = sign * std::ldexp(1.0, -k);
        const Mat m = a + lambda * b;
        const auto [smin, smax] = singular_extremes(m);
        best_smin = std::max(best_smin, smin);
        if (!(smin > 0.0 && smin >= kInvertibleRel * smax)) continue;
        const Mat bp = -m;
        const Mat bpinv = bp.inverse();
        out.lambda = lambda;
        out.pre_chirp = symmetrize(bpinv * b);
        out.post_chirp = symmetrize(-(c + lambda * dd) * bpinv);
        out.scaling = bp;
        out.ft_count = 2;
        found = true;
        break;
      }
    }
    if (!found)
      throw FactorizationError(
          "free_factorization: no lambda in the search list makes A + lambda B invertible "
          "(best smallest singular value " +
              fmt(best_smin) + ")",
          best_smin);
  }

  const double res = (recompose_factorization(out) - s.matrix()).cwiseAbs().maxCoeff();
  if (!(res <= tol_recon))
    throw FactorizationError(
        "free_factorization: recomposition residual " + fmt(res) + " exceeds tolerance " +
            fmt(tol_recon),
        singular_extremes(out.scaling).first);
  return out;
}

}  // namespace mgabor
