#include "cmlab/cm_solver.hpp"

#include "cmlab/parallel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cmlab {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr double kMaxGramCondition = 1e12;
constexpr double kObjectiveRelTol = 1e-10;
constexpr int kStableStreak = 3;

// Weighted polar factor of node values: raw * (w raw^T raw)^{-1/2}.
Eigen::MatrixXd polar_frame(const Eigen::MatrixXd& raw, double weight) {
  Eigen::MatrixXd frame = raw;
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::MatrixXd gram = weight * (frame.transpose() * frame);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    const Eigen::VectorXd d = es.eigenvalues();
    if (pass == 0 && (!(d.minCoeff() > 0.0) ||
                      d.maxCoeff() >= kMaxGramCondition * d.minCoeff()))
      throw std::domain_error("mode stack is rank deficient (Gram condition >= 1e12)");
    const Eigen::MatrixXd inv_sqrt =
        es.eigenvectors() * d.cwiseSqrt().cwiseInverse().asDiagonal() *
        es.eigenvectors().transpose();
    frame = frame * inv_sqrt;
    // One refinement pass removes the rounding left by an ill-conditioned Gram.
    if ((weight * (frame.transpose() * frame) -
         Eigen::MatrixXd::Identity(frame.cols(), frame.cols()))
            .cwiseAbs()
            .maxCoeff() < 1e-14)
      break;
  }
  return frame;
}

struct Problem {
  const Grid& grid;
  const Eigen::SparseMatrix<double>& a;
  const Regularizer& j;
  double mu;
  double penalty;
  const Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>& system;
  int max_iters;
  double tol;
  bool keep_trace;

  double objective(const Eigen::MatrixXd& f) const {
    const double w = grid.weight();
    double total = 0.0;
    const Eigen::MatrixXd af = a * f;
    for (Index i = 0; i < f.cols(); ++i)
      total += j.evaluate(grid, f.col(i)) / mu + w * f.col(i).dot(af.col(i));
    return total;
  }

  double ortho_defect(const Eigen::MatrixXd& f) const {
    return (grid.weight() * (f.transpose() * f) -
            Eigen::MatrixXd::Identity(f.cols(), f.cols()))
        .cwiseAbs()
        .maxCoeff();
  }
};

struct RunOutcome {
  Eigen::MatrixXd frame;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  bool kept_initial = false;
  std::vector<TraceRow> trace;
};

// One splitting run. `smooth_start` seeds the multipliers so that the start
// frame satisfies the stationarity conditions of the quadratic and prox
// blocks; random frames start with zero multipliers.
RunOutcome run_splitting(const Problem& p, const Eigen::MatrixXd& start,
                         bool smooth_start) {
  const double r = p.penalty;
  const double w = p.grid.weight();
  const Index n = start.rows();
  const Index count = start.cols();

  Eigen::MatrixXd psi = start, q = start, frame = start;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, count);
  Eigen::MatrixXd big_b = Eigen::MatrixXd::Zero(n, count);
  if (smooth_start) {
    b = start;
    p.j.subgradient_inplace(p.grid, b);
    b /= p.mu * r;
    big_b = -(2.0 / r) * (p.a * start) - b;
  }

  RunOutcome out;
  const double initial_objective = p.objective(start);
  double prev_objective = initial_objective;
  if (p.keep_trace) out.trace.push_back({0, initial_objective, p.ortho_defect(start)});

  const double threshold = 1.0 / (p.mu * r);
  int streak = 0;
  Eigen::MatrixXd prev_frame = frame;
  int it = 0;
  for (it = 1; it <= p.max_iters; ++it) {
    psi = p.system.solve(r * (q - b) + r * (frame - big_b));
    q = psi + b;
    p.j.prox_inplace(p.grid, q, threshold);
    prev_frame.swap(frame);
    frame = polar_frame(psi + big_b, w);
    b += psi - q;
    big_b += psi - frame;

    double change = 0.0;
    for (Index i = 0; i < count; ++i)
      change = std::max(change, std::sqrt(w) * (frame.col(i) - prev_frame.col(i)).norm());
    const double obj = p.objective(frame);
    if (p.keep_trace) out.trace.push_back({it, obj, p.ortho_defect(frame)});

    streak = change <= p.tol ? streak + 1 : 0;
    const bool flat =
        std::abs(obj - prev_objective) <= kObjectiveRelTol * std::max(1.0, std::abs(obj));
    prev_objective = obj;
    if (streak >= kStableStreak && flat) {
      out.converged = true;
      break;
    }
  }
  out.iterations = std::min(it, p.max_iters);
  out.frame = std::move(frame);
  out.objective = prev_objective;
  if (initial_objective < out.objective) {
    out.frame = start;
    out.objective = initial_objective;
    out.kept_initial = true;
  }
  return out;
}

double spectral_scale(const EigenSystem& eigs, Index n) {
  return std::max(std::abs(eigs.eigenvalues[0]), std::abs(eigs.eigenvalues[n - 1]));
}

}  // namespace

std::string to_string(const StartStrategy& start) {
  return std::visit(overloaded{
                        [](const EigenInit&) { return std::string("eigen"); },
                        [](const RandomOrthonormal& r) {
                          return "random:" + std::to_string(r.seed);
                        },
                        [](const WarmStart&) { return std::string("warm"); },
                    },
                    start);
}

StartStrategy parse_start(const std::string& text) {
  if (text == "eigen") return EigenInit{};
  if (text == "warm") return WarmStart{};
  const std::string prefix = "random:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string digits = text.substr(prefix.size());
    if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos)
      return RandomOrthonormal{std::stoull(digits)};
  }
  throw std::invalid_argument("unknown start strategy '" + text +
                              "' (expected eigen, warm or random:<seed>)");
}

void SolverConfig::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be positive");
  if (penalty && !(*penalty > 0.0)) throw std::invalid_argument("penalty must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_iters <= 0) throw std::invalid_argument("max_iters must be positive");
  if (starts.empty()) throw std::invalid_argument("at least one start strategy is required");
}

SolverConfig default_solver_config(double mu, std::uint64_t seed, int random_starts) {
  SolverConfig c;
  c.mu = mu;
  c.starts = {EigenInit{}};
  for (int k = 1; k <= random_starts; ++k)
    c.starts.push_back(RandomOrthonormal{seed + static_cast<std::uint64_t>(k)});
  return c;
}

double objective(const HamiltonianOperator& h, const Regularizer& j, double mu,
                 const ModeSet& f) {
  require_same_grid(h.grid(), f.grid());
  const Grid& grid = f.grid();
  const Eigen::MatrixXd hf = h.apply_to(f.columns());
  double total = 0.0;
  for (Index i = 0; i < f.count(); ++i)
    total += j.evaluate(grid, f.columns().col(i)) / mu +
             grid.weight() * f.columns().col(i).dot(hf.col(i));
  return total;
}

ModeSet orthonormalize(const ModeSet& raw) {
  return ModeSet(raw.grid(), polar_frame(raw.columns(), raw.grid().weight()));
}

ModeSet random_orthonormal_frame(const Grid& grid, Index count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd raw(grid.size(), count);
  for (Index c = 0; c < count; ++c)
    for (Index r = 0; r < grid.size(); ++r) raw(r, c) = gauss(rng);
  return orthonormalize(ModeSet(grid, std::move(raw)));
}

SolverResult solve_cm(const HamiltonianOperator& h, const Regularizer& j, Index n,
                      const SolverConfig& config, const StartHints& hints) {
  config.validate();
  const Grid& grid = h.grid();
  if (n <= 0 || n > grid.size())
    throw std::invalid_argument("mode count must be in [1, node count]");

  std::optional<EigenSystem> own_eigs;
  const EigenSystem* eigs = hints.eigs;
  if (eigs && eigs->count() < n) eigs = nullptr;
  if (!eigs) {
    own_eigs = reference_eigenpairs(h, n);
    eigs = &*own_eigs;
  }
  require_same_grid(grid, eigs->modes.grid());

  const double penalty =
      config.penalty.value_or(10.0 * (1.0 / config.mu + spectral_scale(*eigs, n)));

  const Eigen::SparseMatrix<double> a = h.sparse();
  Eigen::SparseMatrix<double> system_matrix = 2.0 * a;
  for (Index i = 0; i < grid.size(); ++i) system_matrix.coeffRef(i, i) += 2.0 * penalty;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> system(system_matrix);
  if (system.info() != Eigen::Success || !(system.vectorD().minCoeff() > 0.0))
    throw std::domain_error("2H + 2r is not positive definite; increase the penalty");

  const Problem problem{grid,        a,          j,          config.mu,        penalty,
                        system,      config.max_iters, config.tol, config.keep_trace};

  const std::size_t nstarts = config.starts.size();
  std::vector<RunOutcome> runs(nstarts);
  std::vector<StartOutcome> outcomes(nstarts);
  parallel_for(nstarts, [&](std::size_t s) {
    const StartStrategy& start = config.starts[s];
    outcomes[s].label = to_string(start);
    try {
      Eigen::MatrixXd init;
      bool smooth = true;
      std::visit(overloaded{
                     [&](const EigenInit&) { init = eigs->modes.columns().leftCols(n); },
                     [&](const RandomOrthonormal& rs) {
                       init = random_orthonormal_frame(grid, n, rs.seed).columns();
                       smooth = false;
                     },
                     [&](const WarmStart&) {
                       if (!hints.warm) throw std::invalid_argument("warm start requested without a frame");
                       require_same_grid(grid, hints.warm->grid());
                       if (hints.warm->count() != n)
                         throw std::invalid_argument("warm start frame has the wrong mode count");
                       init = polar_frame(hints.warm->columns(), grid.weight());
                     },
                 },
                 start);
      runs[s] = run_splitting(problem, init, smooth);
      outcomes[s].objective = runs[s].objective;
      outcomes[s].iterations = runs[s].iterations;
      outcomes[s].converged = runs[s].converged;
      outcomes[s].kept_initial = runs[s].kept_initial;
    } catch (const std::exception& e) {
      outcomes[s].error = e.what();
      outcomes[s].objective = std::numeric_limits<double>::infinity();
    }
  });

  std::optional<std::size_t> best;
  for (std::size_t s = 0; s < nstarts; ++s) {
    if (!outcomes[s].error.empty()) continue;
    if (!best) {
      best = s;
      continue;
    }
    const double incumbent = outcomes[*best].objective;
    // Strictly lower beyond rounding; equal objectives keep the earlier start.
    if (outcomes[s].objective <
        incumbent - 1e-12 * std::max(1.0, std::abs(incumbent)))
      best = s;
  }
  if (!best) {
    std::ostringstream msg;
    msg << "every start failed:";
    for (const auto& o : outcomes) msg << " [" << o.label << ": " << o.error << "]";
    throw std::runtime_error(msg.str());
  }

  RunOutcome& win = runs[*best];
  SolverResult result{ModeSet(grid, std::move(win.frame)),
                      0.0,
                      win.iterations,
                      win.converged,
                      std::move(win.trace),
                      static_cast<Index>(*best),
                      std::move(outcomes),
                      penalty};
  result.objective = objective(h, j, config.mu, result.modes);
  return result;
}

}  // namespace cmlab
