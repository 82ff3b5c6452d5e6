#include "cmlab/consistency.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <random>
#include <stdexcept>

namespace cmlab {
namespace {

constexpr double kFrameTolerance = 1e-6;

void require_orthonormal(const ModeSet& f, const char* what) {
  if (f.ortho_defect() > kFrameTolerance)
    throw std::invalid_argument(std::string(what) + " is not orthonormal (defect " +
                                std::to_string(f.ortho_defect()) + ")");
}

// Nonincreasing within slack.
bool nonincreasing(const std::vector<double>& xs, double slack) {
  for (std::size_t k = 1; k < xs.size(); ++k)
    if (xs[k] > xs[k - 1] + slack) return false;
  return true;
}

}  // namespace

double energy(const HamiltonianOperator& h, const ModeSet& f) {
  require_same_grid(h.grid(), f.grid());
  const Eigen::MatrixXd hf = h.apply_to(f.columns());
  double e = 0.0;
  for (Index i = 0; i < f.count(); ++i) e += f.columns().col(i).dot(hf.col(i));
  return f.grid().weight() * e;
}

Eigen::MatrixXd interaction_matrix(const HamiltonianOperator& h, const ModeSet& f) {
  require_same_grid(h.grid(), f.grid());
  require_orthonormal(f, "mode set");
  const Eigen::MatrixXd hf = h.apply_to(f.columns());
  Eigen::MatrixXd m = f.grid().weight() * (f.columns().transpose() * hf);
  // Averaging leaves the diagonal untouched, so the trace is exactly E.
  return 0.5 * (m + m.transpose());
}

Eigen::VectorXd nu_spectrum(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix is not square");
  if (m.size() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

ProcrustesResult procrustes_align(const ModeSet& f, const ModeSet& phi) {
  require_same_grid(f.grid(), phi.grid());
  if (f.count() != phi.count())
    throw std::invalid_argument("procrustes alignment needs equal mode counts");
  require_orthonormal(f, "mode set");
  require_orthonormal(phi, "reference frame");

  const Eigen::MatrixXd overlap =
      f.grid().weight() * (phi.columns().transpose() * f.columns());
  if (overlap.norm() < 1e-12)
    throw std::domain_error("no meaningful alignment: the spans are orthogonal");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(overlap, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::MatrixXd rotation = svd.matrixU() * svd.matrixV().transpose();

  ModeSet aligned(phi.grid(), phi.columns() * rotation);
  double residual = 0.0;
  const double sw = std::sqrt(f.grid().weight());
  for (Index i = 0; i < f.count(); ++i)
    residual = std::max(residual,
                        sw * (f.columns().col(i) - aligned.columns().col(i)).norm());
  return {std::move(rotation), residual, std::move(aligned)};
}

CoeffMatrix coefficients(const ModeSet& f, const EigenSystem& eigs, Index depth) {
  require_same_grid(f.grid(), eigs.modes.grid());
  if (depth <= 0 || depth > eigs.count())
    throw std::invalid_argument("expansion depth " + std::to_string(depth) +
                                " exceeds the " + std::to_string(eigs.count()) +
                                " available eigenpairs");
  CoeffMatrix c;
  c.entries = f.grid().weight() *
              (f.columns().transpose() * eigs.modes.columns().leftCols(depth));
  c.col_mass = c.entries.array().square().colwise().sum().transpose();
  c.tail_mass = (1.0 - c.entries.array().square().rowwise().sum()).matrix();
  return c;
}

double gap_lower_bound(const CoeffMatrix& coeffs, const EigenSystem& eigs, Index n) {
  if (n + 1 > eigs.count())
    throw std::invalid_argument("gap bound needs N+1 eigenpairs");
  if (coeffs.col_mass.size() < n)
    throw std::invalid_argument("coefficients must cover the first N eigenfunctions");
  const double next = eigs.eigenvalues[n];
  double total = 0.0;
  for (Index l = 0; l < n; ++l) {
    double term = (1.0 - coeffs.col_mass[l]) * (next - eigs.eigenvalues[l]);
    if (term < -1e-10)
      throw std::logic_error("negative summand in the gap bound: column mass above one "
                             "or eigenvalues out of order");
    total += std::max(term, 0.0);
  }
  return total;
}

Eigen::MatrixXd random_semi_unitary(Index rows, Index cols, std::uint64_t seed) {
  if (rows <= 0 || rows > cols)
    throw std::invalid_argument("semi-unitary draw needs 0 < rows <= cols");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd g(cols, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < cols; ++r) g(r, c) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  // Sign fix on R's diagonal makes the draw Haar distributed.
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < cols; ++k)
    if (r(k, k) < 0.0) q.col(k) *= -1.0;
  return q.topRows(rows);
}

double column_mass_lemma_check(Index rows, Index cols, std::uint64_t seed) {
  const Eigen::MatrixXd a = random_semi_unitary(rows, cols, seed);
  return a.array().square().colwise().sum().maxCoeff();
}

ModeSet random_frame_in_span(const EigenSystem& eigs, Index n, Index depth,
                             std::uint64_t seed) {
  if (depth > eigs.count())
    throw std::invalid_argument("span depth exceeds available eigenpairs");
  const Eigen::MatrixXd c = random_semi_unitary(n, depth, seed);
  return ModeSet(eigs.modes.grid(), eigs.modes.columns().leftCols(depth) * c.transpose());
}

Eigen::VectorXd localization(const ModeSet& f) {
  const double w = f.grid().weight();
  Eigen::VectorXd widths(f.count());
  for (Index i = 0; i < f.count(); ++i) {
    const auto col = f.columns().col(i).array();
    const double m2 = w * col.square().sum();
    const double m4 = w * col.square().square().sum();
    if (!(m4 > 0.0)) throw std::invalid_argument("localization of a zero mode");
    widths[i] = m2 * m2 / m4;
  }
  return widths;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::NotApplicable: return "N/A";
    case Verdict::Degenerate: return "DEGENERATE";
  }
  return "?";
}

SweepReport mu_sweep(const HamiltonianOperator& h, const Regularizer& j, Index n,
                     const std::vector<double>& mu_schedule, const SolverConfig& base,
                     const SweepOptions& options) {
  if (mu_schedule.empty()) throw std::invalid_argument("mu schedule is empty");
  for (std::size_t k = 0; k < mu_schedule.size(); ++k) {
    if (!(mu_schedule[k] > 0.0)) throw std::invalid_argument("mu values must be positive");
    if (k > 0 && !(mu_schedule[k] > mu_schedule[k - 1]))
      throw std::invalid_argument("mu schedule must be strictly ascending");
  }

  const EigenSystem eigs = reference_eigenpairs(h, n + 1, options.eigen);
  const ModeSet phi = eigs.modes.leading(n);

  SweepReport report;
  report.n = n;
  report.regularizer = j.name();
  report.eigenvalues = eigs.eigenvalues;
  report.spectral_gap = spectral_gap(eigs, n);
  report.gap_threshold = options.gap_threshold.value_or(
      1e-6 * std::abs(eigs.eigenvalues[n]) + 1e-8);
  report.degenerate = report.spectral_gap <= report.gap_threshold;

  const double e0 = eigs.energy_sum(n);
  double phi_penalty = 0.0;
  for (Index i = 0; i < n; ++i) phi_penalty += j.evaluate(phi.grid(), phi.columns().col(i));

  std::optional<ModeSet> previous;
  for (double mu : mu_schedule) {
    SolverConfig config = base;
    config.mu = mu;
    if (previous) config.starts.push_back(WarmStart{});
    const StartHints hints{&eigs, previous ? &*previous : nullptr};
    SolverResult res = solve_cm(h, j, n, config, hints);

    SweepRecord rec;
    rec.mu = mu;
    rec.ground_energy = e0;
    const Eigen::MatrixXd m = interaction_matrix(h, res.modes);
    rec.energy = m.trace();
    rec.energy_gap = rec.energy - e0;
    rec.nu = nu_spectrum(m);
    rec.max_eig_dev = (rec.nu - eigs.eigenvalues.head(n)).cwiseAbs().maxCoeff();
    rec.procrustes_residual = procrustes_align(res.modes, phi).residual;
    rec.ortho_defect = res.modes.ortho_defect();
    rec.iterations = res.iterations;
    rec.converged = res.converged;
    rec.objective = res.objective;
    rec.energy_cap = phi_penalty / mu;
    rec.best_start = res.starts[res.best_start].label;
    rec.starts = res.starts;
    report.records.push_back(std::move(rec));
    previous = std::move(res.modes);
  }
  report.final_modes = std::move(previous);

  if (report.degenerate) {
    report.monotone_energy = report.eig_convergence = report.l2_convergence =
        Verdict::Degenerate;
  } else if (report.records.size() >= 2) {
    std::vector<double> gaps, devs, residuals;
    bool floor_ok = true;
    for (const auto& r : report.records) {
      gaps.push_back(r.energy_gap);
      devs.push_back(r.max_eig_dev);
      residuals.push_back(r.procrustes_residual);
      floor_ok = floor_ok && r.energy_gap >= -1e-8;
    }
    auto verdict = [](bool ok) { return ok ? Verdict::Pass : Verdict::Fail; };
    report.monotone_energy = verdict(floor_ok && nonincreasing(gaps, options.energy_slack));
    report.eig_convergence = verdict(nonincreasing(devs, options.residual_slack));
    report.l2_convergence = verdict(nonincreasing(residuals, options.residual_slack));
  }
  return report;
}

}  // namespace cmlab
