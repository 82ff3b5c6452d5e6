#pragma once

#include "cmlab/eigensolver.hpp"
#include "cmlab/hamiltonian.hpp"
#include "cmlab/mode_set.hpp"
#include "cmlab/regularizer.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cmlab {

/// Start from the lowest N eigenfunctions.
struct EigenInit {};
/// Start from a Gaussian random frame, orthonormalized.
struct RandomOrthonormal {
  std::uint64_t seed = 0;
};
/// Start from a caller-supplied frame (the previous point of a mu-sweep).
struct WarmStart {};

using StartStrategy = std::variant<EigenInit, RandomOrthonormal, WarmStart>;

/// "eigen", "random:<seed>", "warm"
std::string to_string(const StartStrategy& start);
StartStrategy parse_start(const std::string& text);

struct SolverConfig {
  double mu = 1.0;
  /// Splitting coupling r. Unset means 10 * (1/mu + spectral scale), where
  /// the scale is max(|lambda_1|, |lambda_N|).
  std::optional<double> penalty;
  int max_iters = 20000;
  double tol = 1e-7;
  std::vector<StartStrategy> starts{EigenInit{}};
  bool keep_trace = true;

  void validate() const;
};

/// EigenInit plus `random_starts` random frames seeded seed+1, seed+2, ...
SolverConfig default_solver_config(double mu, std::uint64_t seed,
                                   int random_starts = 2);

/// Optional precomputed inputs. Missing eigenpairs are computed on demand.
struct StartHints {
  const EigenSystem* eigs = nullptr;
  const ModeSet* warm = nullptr;
};

struct TraceRow {
  int iter = 0;
  double objective = 0.0;
  double ortho_defect = 0.0;
};

struct StartOutcome {
  std::string label;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  /// The start frame itself scored lower than the iterate it converged to.
  bool kept_initial = false;
  std::string error;  // non-empty when the start failed
};

struct SolverResult {
  ModeSet modes;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<TraceRow> trace;
  Index best_start = 0;
  std::vector<StartOutcome> starts;
  double penalty = 0.0;
};

/// sum_i (1/mu) J(f_i) + <f_i, H f_i>
double objective(const HamiltonianOperator& h, const Regularizer& j, double mu,
                 const ModeSet& f);

/// Closest orthonormal frame (weighted polar factor) spanning the same
/// subspace. Throws when the Gram matrix condition number reaches 1e12.
ModeSet orthonormalize(const ModeSet& raw);

/// Gaussian random frame of `count` modes, orthonormalized.
ModeSet random_orthonormal_frame(const Grid& grid, Index count, std::uint64_t seed);

/// Minimizes sum_i (1/mu) J(f_i) + <f_i, H f_i> subject to <f_j, f_k> = delta_jk
/// by operator splitting: one copy of the modes carries J (prox step), one
/// carries the orthonormality constraint (polar projection), coupled to the
/// quadratic energy through a linear solve with 2H + 2r. Every start is run
/// and the lowest-objective orthonormal frame wins (ties: lowest start index).
/// Each start's initial frame is itself a candidate, so with EigenInit the
/// result never scores above the eigenfunctions.
SolverResult solve_cm(const HamiltonianOperator& h, const Regularizer& j,
                      Index n, const SolverConfig& config,
                      const StartHints& hints = {});

}  // namespace cmlab
