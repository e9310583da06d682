#pragma once

#include <stdexcept>
#include <string>

namespace mgabor {

// Bad user/caller input: dimension mismatches, non-symplectic matrices,
// malformed grids. CLI maps these to exit code 2.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A decomposition finished but failed its own residual check.
// CLI maps these to exit code 3.
class DecompositionError : public std::runtime_error {
public:
  DecompositionError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

private:
  double residual_ = 0.0;
};

// Factorization precondition failure (near-singular B block with no usable
// shear parameter). CLI maps these to exit code 3.
class FactorizationError : public std::runtime_error {
public:
  FactorizationError(const std::string& what, double smallest_singular)
      : std::runtime_error(what), smallest_singular_(smallest_singular) {}
  double smallest_singular() const { return smallest_singular_; }

private:
  double smallest_singular_ = 0.0;
};

// Any other internal numerical failure. CLI maps these to exit code 4.
class ComputationError : public std::runtime_error {
public:
  explicit ComputationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mgabor
