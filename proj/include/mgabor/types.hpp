#pragma once

#include <complex>
#include <Eigen/Dense>

namespace mgabor {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Default tolerance for structural matrix checks (symplectic residuals etc.).
inline constexpr double kDefaultTol = 1e-8;

inline constexpr Cplx kI{0.0, 1.0};

} // namespace mgabor
