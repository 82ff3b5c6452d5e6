#include "cmlab/verify.hpp"

#include "cmlab/consistency.hpp"
#include "cmlab/eigensolver.hpp"
#include "cmlab/hamiltonian.hpp"
#include "cmlab/parallel.hpp"
#include "cmlab/report_io.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cmlab {
namespace {

constexpr double kMassTol = 1e-10;
constexpr double kGapTol = 1e-8;
constexpr Index kMaxModes = 8;

struct TestSystem {
  HamiltonianOperator h;
  EigenSystem eigs;  // 4 * kMaxModes + 1 pairs
};

std::vector<TestSystem> test_systems() {
  const Grid box = Grid::interval(1.0, 160, Boundary::Dirichlet);
  const Grid wide = Grid::interval(12.0, 200, Boundary::Dirichlet);
  std::vector<TestSystem> out;
  for (auto h : {build_hamiltonian(box, FreeParticle{}),
                 build_hamiltonian(wide, MultiWell{{{4.0}, {8.0}}, 8.0, 0.7})}) {
    EigenSystem eigs = reference_eigenpairs(h, 4 * kMaxModes + 1);
    out.push_back({std::move(h), std::move(eigs)});
  }
  return out;
}

struct CaseResult {
  double mass = 0.0;
  double gap_slack = 0.0;
  double ratio = 0.0;
  std::string mass_error;
  std::string gap_error;
};

std::string num(double x) { return format_number(x); }

}  // namespace

VerifyReport run_verification(std::uint64_t seed, int cases) {
  if (cases < 1) throw std::invalid_argument("cases must be at least 1");
  const std::vector<TestSystem> systems = test_systems();
  std::vector<CaseResult> results(static_cast<std::size_t>(cases));

  parallel_for(results.size(), [&](std::size_t k) {
    const std::uint64_t s = seed + k;
    CaseResult& r = results[k];

    const Index n = 1 + static_cast<Index>(s % 8);
    const Index cols = n + static_cast<Index>((s / 8) % static_cast<std::uint64_t>(65 - n));
    r.mass = column_mass_lemma_check(n, cols, s);
    if (!(r.mass <= 1.0 + kMassTol))
      r.mass_error = "N=" + std::to_string(n) + " K=" + std::to_string(cols) +
                     " max column mass " + num(r.mass);

    const TestSystem& sys = systems[k % systems.size()];
    const Index depth = 4 * n;
    const ModeSet f = random_frame_in_span(sys.eigs, n, depth, s);
    const double gap = std::abs(energy(sys.h, f) - sys.eigs.energy_sum(n));
    try {
      const double bound = gap_lower_bound(coefficients(f, sys.eigs, depth), sys.eigs, n);
      r.gap_slack = gap + kGapTol - bound;
      r.ratio = gap > 0.0 ? bound / gap : 0.0;
      if (r.gap_slack < 0.0)
        r.gap_error = "N=" + std::to_string(n) + " bound " + num(bound) +
                      " exceeds |E-E0| " + num(gap);
    } catch (const std::logic_error& e) {
      r.gap_slack = -std::numeric_limits<double>::infinity();
      r.gap_error = e.what();
    }
  });

  VerifyReport report;
  report.cases = cases;
  report.min_gap_slack = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < results.size(); ++k) {
    const CaseResult& r = results[k];
    report.max_column_mass = std::max(report.max_column_mass, r.mass);
    report.min_gap_slack = std::min(report.min_gap_slack, r.gap_slack);
    report.max_gap_ratio = std::max(report.max_gap_ratio, r.ratio);
    if (!r.mass_error.empty()) report.violations.push_back({"column_mass", seed + k, r.mass_error});
    if (!r.gap_error.empty()) report.violations.push_back({"gap_bound", seed + k, r.gap_error});
  }
  report.column_mass_slack = 1.0 + kMassTol - report.max_column_mass;
  return report;
}

std::string format_report(const VerifyReport& report, std::uint64_t seed) {
  std::ostringstream out;
  out << "verify seed=" << seed << " cases=" << report.cases << '\n'
      << "column_mass: max=" << num(report.max_column_mass)
      << " slack=" << num(report.column_mass_slack) << '\n'
      << "gap_bound: min_slack=" << num(report.min_gap_slack)
      << " max_ratio=" << num(report.max_gap_ratio) << '\n';
  for (const auto& v : report.violations)
    out << "VIOLATION " << v.suite << " seed=" << v.seed << ": " << v.detail << '\n';
  out << (report.ok() ? "all properties hold" : "property violations found") << '\n';
  return out.str();
}

}  // namespace cmlab
