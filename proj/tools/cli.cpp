#include "cli.hpp"

#include "cmlab/config.hpp"
#include "cmlab/consistency.hpp"
#include "cmlab/eigensolver.hpp"
#include "cmlab/regularizer.hpp"
#include "cmlab/report_io.hpp"
#include "cmlab/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>

namespace cmlab::cli {
namespace {

namespace fs = std::filesystem;

struct Overrides {
  std::string config_path;
  std::optional<double> mu;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

ExperimentConfig load(const Overrides& o) {
  ExperimentConfig c = load_config(o.config_path);
  if (o.mu) {
    if (!(*o.mu > 0.0)) throw ConfigError("--mu must be positive");
    c.problem.mu = *o.mu;
  }
  if (o.seed) c.seed = *o.seed;
  if (o.out) c.output.dir = *o.out;
  return c;
}

void write_json(const fs::path& path, nlohmann::json doc) {
  write_atomic(path, doc.dump(2) + "\n");
}

double degenerate_threshold(const EigenSystem& eigs, Index n) {
  return 1e-6 * std::abs(eigs.eigenvalues[n]) + 1e-8;
}

EigenOptions eigen_options(const ExperimentConfig& c) {
  EigenOptions o;
  o.dense_limit = c.solver.dense_limit;
  return o;
}

int cmd_eig(const Overrides& o, std::ostream& out) {
  const ExperimentConfig c = load(o);
  const HamiltonianOperator h = build_hamiltonian(c.domain.grid(), c.potential.potential());
  const Index n = c.problem.modes;
  const Index count = std::min<Index>(n + 1, h.grid().size());
  const EigenSystem eigs = reference_eigenpairs(h, count, eigen_options(c));

  for (Index i = 0; i < count; ++i)
    out << "lambda_" << i + 1 << " = " << format_number(eigs.eigenvalues[i]) << '\n';
  std::optional<double> gap;
  bool degenerate = false;
  if (count > n) {
    gap = spectral_gap(eigs, n);
    degenerate = *gap <= degenerate_threshold(eigs, n);
    out << "spectral_gap = " << format_number(*gap) << '\n';
    if (degenerate)
      out << "GAP_DEGENERATE: lambda_" << n + 1 << " - lambda_" << n << " = "
          << format_number(*gap) << " is below " << format_number(degenerate_threshold(eigs, n))
          << '\n';
  }

  const fs::path dir(c.output.dir);
  if (c.output.wants("csv")) {
    write_atomic(dir / "eigs.csv", eigs_csv(eigs));
    write_atomic(dir / "eigenmodes.csv", modes_csv(eigs.modes.leading(n)));
  }
  if (c.output.wants("json")) {
    nlohmann::json doc = {{"eigenvalues", std::vector<double>(eigs.eigenvalues.data(),
                                                              eigs.eigenvalues.data() + count)},
                          {"degenerate", degenerate},
                          {"config", to_json(c)}};
    doc["spectral_gap"] = gap ? nlohmann::json(*gap) : nlohmann::json(nullptr);
    write_json(dir / "eigs.json", doc);
  }
  return kOk;
}

int cmd_solve(const Overrides& o, std::ostream& out) {
  const ExperimentConfig c = load(o);
  if (!c.problem.mu) throw ConfigError("solve needs problem.mu or --mu");
  const double mu = *c.problem.mu;
  const HamiltonianOperator h = build_hamiltonian(c.domain.grid(), c.potential.potential());
  const Index n = c.problem.modes;
  const EigenSystem eigs = reference_eigenpairs(h, n, eigen_options(c));
  const RegularizerPtr j = make_regularizer(c.problem.regularizer);

  const SolverResult res = solve_cm(h, *j, n, c.solver_config(mu), {&eigs, nullptr});
  const double e = energy(h, res.modes);
  const double e0 = eigs.energy_sum(n);
  const Eigen::VectorXd widths = localization(res.modes);

  out << "objective = " << format_number(res.objective) << '\n'
      << "E = " << format_number(e) << '\n'
      << "E0 = " << format_number(e0) << '\n'
      << "ortho_defect = " << format_number(res.modes.ortho_defect()) << '\n'
      << "iterations = " << res.iterations << '\n'
      << "converged = " << (res.converged ? "true" : "false") << '\n'
      << "best_start = " << res.starts[res.best_start].label << '\n';
  for (Index i = 0; i < widths.size(); ++i)
    out << "width_" << i + 1 << " = " << format_number(widths[i]) << '\n';

  const fs::path dir(c.output.dir);
  if (c.output.wants("csv")) {
    write_atomic(dir / "modes.csv", modes_csv(res.modes));
    if (c.output.trace) write_atomic(dir / "trace.csv", trace_csv(res.trace));
  }
  if (c.output.wants("json")) {
    nlohmann::json doc = solve_json(res, mu, e, e0, widths);
    doc["config"] = to_json(c);
    write_json(dir / "solve.json", doc);
  }
  return kOk;
}

int cmd_sweep(const Overrides& o, std::ostream& out) {
  const ExperimentConfig c = load(o);
  std::vector<double> schedule = c.problem.mu_schedule;
  if (o.mu || schedule.empty()) {
    if (!c.problem.mu) throw ConfigError("sweep needs problem.mu_schedule, problem.mu or --mu");
    schedule = {*c.problem.mu};
  }
  const HamiltonianOperator h = build_hamiltonian(c.domain.grid(), c.potential.potential());
  const Index n = c.problem.modes;
  if (n + 1 > h.grid().size()) throw ConfigError("sweep needs N+1 grid nodes");
  const RegularizerPtr j = make_regularizer(c.problem.regularizer);

  SweepOptions options;
  options.eigen = eigen_options(c);
  const SweepReport report = mu_sweep(h, *j, n, schedule, c.solver_config(schedule.front()),
                                      options);

  if (report.degenerate)
    out << "GAP_DEGENERATE: lambda_" << n + 1 << " - lambda_" << n << " = "
        << format_number(report.spectral_gap) << " is below "
        << format_number(report.gap_threshold) << '\n';
  for (const auto& r : report.records)
    out << "mu = " << format_number(r.mu) << "  energy_gap = " << format_number(r.energy_gap)
        << "  max_eig_dev = " << format_number(r.max_eig_dev)
        << "  procrustes_residual = " << format_number(r.procrustes_residual)
        << "  converged = " << (r.converged ? "true" : "false") << '\n';
  if (report.degenerate) {
    out << "DEGENERATE\n";
  } else {
    out << "MONOTONE_ENERGY: " << to_string(report.monotone_energy) << '\n'
        << "EIG_CONVERGENCE: " << to_string(report.eig_convergence) << '\n'
        << "L2_CONVERGENCE: " << to_string(report.l2_convergence) << '\n';
  }

  const fs::path dir(c.output.dir);
  if (c.output.wants("csv")) {
    write_atomic(dir / "sweep.csv", sweep_csv(report));
    if (report.final_modes) write_atomic(dir / "cm_modes.csv", modes_csv(*report.final_modes));
  }
  if (c.output.wants("json")) {
    nlohmann::json doc = sweep_json(report);
    doc["config"] = to_json(c);
    write_json(dir / "sweep.json", doc);
  }

  const bool failed = report.monotone_energy == Verdict::Fail ||
                      report.eig_convergence == Verdict::Fail ||
                      report.l2_convergence == Verdict::Fail;
  return failed ? kVerificationFailure : kOk;
}

int cmd_verify(std::uint64_t seed, int cases, std::ostream& out, std::ostream& err) {
  if (cases < 1) {
    err << "error: --cases must be at least 1\n";
    return kUsageError;
  }
  const VerifyReport report = run_verification(seed, cases);
  out << format_report(report, seed);
  return report.ok() ? kOk : kVerificationFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compressed-mode experiments on finite-difference Schroedinger operators",
               "cm_lab"};
  app.require_subcommand(1);

  Overrides eig_o, solve_o, sweep_o;
  auto add_common = [](CLI::App* sub, Overrides& o) {
    sub->add_option("config", o.config_path, "experiment config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "override the config seed");
    sub->add_option("--out", o.out, "override output.dir");
  };
  CLI::App* eig = app.add_subcommand("eig", "reference eigenpairs and spectral gap");
  add_common(eig, eig_o);
  CLI::App* solve = app.add_subcommand("solve", "compressed modes at a single mu");
  add_common(solve, solve_o);
  solve->add_option("--mu", solve_o.mu, "override problem.mu");
  CLI::App* sweep = app.add_subcommand("sweep", "mu sweep with convergence verdicts");
  add_common(sweep, sweep_o);
  sweep->add_option("--mu", sweep_o.mu, "run a single-element schedule at this mu");

  std::uint64_t verify_seed = 0;
  int verify_cases = 1000;
  CLI::App* verify = app.add_subcommand("verify", "property suites for the coefficient lemmas");
  verify->add_option("--seed", verify_seed, "base seed");
  verify->add_option("--cases", verify_cases, "number of seeded draws per suite");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*eig) return cmd_eig(eig_o, out);
    if (*solve) return cmd_solve(solve_o, out);
    if (*sweep) return cmd_sweep(sweep_o, out);
    return cmd_verify(verify_seed, verify_cases, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::logic_error& e) {
    err << "invalid input: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationFailure;
  }
}

}  // namespace cmlab::cli
