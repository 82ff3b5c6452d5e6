#pragma once

#include "cmlab/hamiltonian.hpp"
#include "cmlab/mode_set.hpp"

#include <Eigen/Core>

#include <cstdint>

namespace cmlab {

/// Lowest eigenpairs of a discretized Hamiltonian, sorted nondecreasing and
/// orthonormal under the grid inner product.
struct EigenSystem {
  Eigen::VectorXd eigenvalues;
  ModeSet modes;
  Eigen::VectorXd residual_norms;  // ||H phi_i - lambda_i phi_i||_2

  Index count() const { return eigenvalues.size(); }
  /// lambda_1 + ... + lambda_n
  double energy_sum(Index n) const { return eigenvalues.head(n).sum(); }
};

struct EigenOptions {
  Index dense_limit = kDefaultDenseLimit;
  // Iterative (thick-restart Lanczos) path only.
  Index krylov_dim = 0;  // 0 picks a size from the requested count
  int max_restarts = 400;
  double residual_tol = 1e-10;
  std::uint64_t seed = 0x5eed;
};

EigenSystem reference_eigenpairs(const HamiltonianOperator& h, Index count,
                                 const EigenOptions& options = {});

/// lambda_{N+1} - lambda_N
double spectral_gap(const EigenSystem& eigs, Index n);

/// Flips each column so that its entry of largest magnitude is positive.
void normalize_signs(Eigen::MatrixXd& vectors);

}  // namespace cmlab
