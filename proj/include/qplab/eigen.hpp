#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qplab {

/// Dense row-major symmetric matrix.
struct SymmetricMatrix {
  std::size_t n = 0;
  std::vector<double> a;

  explicit SymmetricMatrix(std::size_t size = 0) : n(size), a(size * size, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  double frobenius() const;
  double trace() const;
};

enum class EigenMethod {
  jacobi,          // cyclic Jacobi sweeps
  householder_ql,  // Householder tridiagonalization + implicit QL
  automatic,       // Jacobi up to kJacobiAutoLimit, Householder-QL above
};

inline constexpr std::size_t kJacobiAutoLimit = 128;

struct EigenOptions {
  EigenMethod method = EigenMethod::automatic;
  double relative_tolerance = 1e-12;  // Jacobi: off-diagonal mass / ||A||_F
  int max_sweeps = 100;
};

struct EigenResult {
  std::vector<double> values;  // descending
  EigenMethod method = EigenMethod::jacobi;
  int sweeps = 0;  // Jacobi sweeps, or the max QL iterations per eigenvalue
};

/// All eigenvalues of a symmetric matrix. Throws Error(numeric) when the
/// iteration does not converge.
EigenResult symmetric_eigenvalues(SymmetricMatrix m, const EigenOptions& opts = {});

const char* to_string(EigenMethod m) noexcept;

}  // namespace qplab
