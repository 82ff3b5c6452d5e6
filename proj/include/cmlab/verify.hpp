#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cmlab {

struct Violation {
  std::string suite;  // "column_mass" or "gap_bound"
  std::uint64_t seed = 0;
  std::string detail;
};

struct VerifyReport {
  int cases = 0;
  double max_column_mass = 0.0;
  double column_mass_slack = 0.0;  // 1 + tol - max_column_mass
  double min_gap_slack = 0.0;      // min over draws of |E - E0| + tol - bound
  double max_gap_ratio = 0.0;      // bound / |E - E0|, draws with nonzero energy gap
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

/// Property suites for the two coefficient lemmas. Case k uses seed + k.
///
/// column_mass: a Haar semi-unitary N x K draw with N = 1 + s % 8 and
/// K = N + (s / 8) % (65 - N); every column mass must stay below 1 + 1e-10.
///
/// gap_bound: a random orthonormal N-frame in the span of the first 4N
/// eigenfunctions of a fixed test system (alternating between a Dirichlet box
/// and a double well); the eigenvalue-weighted mass deficit must not exceed
/// |E - E0| + 1e-8.
VerifyReport run_verification(std::uint64_t seed, int cases);

/// Plain-text summary, one line per suite and one per violation.
std::string format_report(const VerifyReport& report, std::uint64_t seed);

}  // namespace cmlab
