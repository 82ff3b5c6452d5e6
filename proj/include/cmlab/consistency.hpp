#pragma once

#include "cmlab/cm_solver.hpp"
#include "cmlab/eigensolver.hpp"
#include "cmlab/hamiltonian.hpp"
#include "cmlab/mode_set.hpp"
#include "cmlab/regularizer.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cmlab {

/// sum_i <f_i, H f_i>
double energy(const HamiltonianOperator& h, const ModeSet& f);

/// N x N matrix with entries <f_j, H f_k>, stored exactly symmetric.
Eigen::MatrixXd interaction_matrix(const HamiltonianOperator& h, const ModeSet& f);

/// Eigenvalues of a symmetric matrix in nondecreasing order.
Eigen::VectorXd nu_spectrum(const Eigen::MatrixXd& m);

struct ProcrustesResult {
  Eigen::MatrixXd rotation;  // orthogonal N x N
  double residual = 0.0;     // max_i ||f_i - (Phi R)_i||_2
  ModeSet aligned;           // Phi R
};

/// Best orthogonal rotation R minimizing sum_i ||f_i - (Phi R)_i||^2, from the
/// polar factor of the overlap <Phi^T, F>. Throws when the overlap vanishes
/// (the two spans are orthogonal).
ProcrustesResult procrustes_align(const ModeSet& f, const ModeSet& phi);

/// Expansion of modes in the eigenbasis, a_ik = <f_i, phi_k> for k < K.
struct CoeffMatrix {
  Eigen::MatrixXd entries;    // N x K
  Eigen::VectorXd col_mass;   // b_l = sum_i a_il^2
  Eigen::VectorXd tail_mass;  // 1 - sum_{k<K} a_ik^2, per mode
};

CoeffMatrix coefficients(const ModeSet& f, const EigenSystem& eigs, Index depth);

/// sum_{l<=N} (1 - b_l)(lambda_{N+1} - lambda_l). Summands are nonnegative
/// for any orthonormal frame; rounding below zero (to -1e-10) is clamped and
/// anything further is reported as an error.
double gap_lower_bound(const CoeffMatrix& coeffs, const EigenSystem& eigs, Index n);

/// Largest column mass sum_i |a_ik|^2 of the first `rows` rows of a random
/// `cols` x `cols` orthogonal matrix.
double column_mass_lemma_check(Index rows, Index cols, std::uint64_t seed);

/// First `rows` rows of a Haar-random `cols` x `cols` orthogonal matrix.
Eigen::MatrixXd random_semi_unitary(Index rows, Index cols, std::uint64_t seed);

/// Random orthonormal frame of n modes inside span{phi_1..phi_depth}.
ModeSet random_frame_in_span(const EigenSystem& eigs, Index n, Index depth,
                             std::uint64_t seed);

/// Inverse-participation width (sum w f^2)^2 / (sum w f^4) of each mode.
Eigen::VectorXd localization(const ModeSet& f);

enum class Verdict { Pass, Fail, NotApplicable, Degenerate };
std::string to_string(Verdict v);

struct SweepRecord {
  double mu = 0.0;
  double energy = 0.0;  // E
  double ground_energy = 0.0;  // E0 = lambda_1 + ... + lambda_N
  double energy_gap = 0.0;
  Eigen::VectorXd nu;
  double max_eig_dev = 0.0;
  double procrustes_residual = 0.0;
  double ortho_defect = 0.0;
  int iterations = 0;
  bool converged = false;
  double objective = 0.0;
  double energy_cap = 0.0;  // (1/mu) sum_i J(phi_i)
  std::string best_start;
  std::vector<StartOutcome> starts;
};

struct SweepOptions {
  /// Unset: 1e-6 |lambda_{N+1}| + 1e-8.
  std::optional<double> gap_threshold;
  double energy_slack = 1e-6;
  double residual_slack = 1e-4;
  EigenOptions eigen;
};

struct SweepReport {
  Index n = 0;
  std::string regularizer;
  Eigen::VectorXd eigenvalues;  // lambda_1 .. lambda_{N+1}
  double spectral_gap = 0.0;
  double gap_threshold = 0.0;
  bool degenerate = false;
  std::vector<SweepRecord> records;
  Verdict monotone_energy = Verdict::NotApplicable;
  Verdict eig_convergence = Verdict::NotApplicable;
  Verdict l2_convergence = Verdict::NotApplicable;
  std::optional<ModeSet> final_modes;  // solution at the largest mu
};

/// Solves at each mu of an ascending schedule, warm-starting each solve from
/// the previous solution, and records energies, the nu-spectrum, eigenvalue
/// deviations and the Procrustes residual to the lowest N eigenfunctions.
/// A spectral gap at or below the threshold marks the report degenerate and
/// suppresses the convergence verdicts; the sweep still runs.
SweepReport mu_sweep(const HamiltonianOperator& h, const Regularizer& j, Index n,
                     const std::vector<double>& mu_schedule,
                     const SolverConfig& base, const SweepOptions& options = {});

}  // namespace cmlab
