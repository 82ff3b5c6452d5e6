#include "cmlab/eigensolver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cmlab {
namespace {

EigenSystem package(const HamiltonianOperator& h, Eigen::VectorXd values,
                    Eigen::MatrixXd unit_vectors) {
  normalize_signs(unit_vectors);
  const Grid& grid = h.grid();
  // Unit Euclidean vectors -> unit functions under the weighted product.
  Eigen::MatrixXd modes = unit_vectors / std::sqrt(grid.weight());
  const Eigen::MatrixXd hv = h.apply_to(modes);
  Eigen::VectorXd residuals(values.size());
  for (Index i = 0; i < values.size(); ++i)
    residuals[i] = std::sqrt(grid.weight()) *
                   (hv.col(i) - values[i] * modes.col(i)).norm();
  return EigenSystem{std::move(values), ModeSet(grid, std::move(modes)),
                     std::move(residuals)};
}

EigenSystem dense_eigenpairs(const HamiltonianOperator& h, Index count,
                             Index limit) {
  const Eigen::MatrixXd a = materialize_dense(h, limit);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("dense symmetric eigensolver failed");
  return package(h, solver.eigenvalues().head(count),
                 solver.eigenvectors().leftCols(count));
}

// Orthogonalize w against the first k columns of v, twice.
void orthogonalize(const Eigen::MatrixXd& v, Index k, Eigen::VectorXd& w) {
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::VectorXd c = v.leftCols(k).transpose() * w;
    w.noalias() -= v.leftCols(k) * c;
  }
}

// Thick-restart Lanczos with full reorthogonalization. The projected matrix
// is formed as V^T A V from stored products, so the Rayleigh-Ritz step stays
// exact even after restarts.
EigenSystem lanczos_eigenpairs(const HamiltonianOperator& h, Index count,
                               const EigenOptions& opt) {
  const Eigen::SparseMatrix<double> a = h.sparse();
  const Index n = a.rows();
  const Index m = std::min<Index>(
      n, opt.krylov_dim > 0 ? opt.krylov_dim : std::max<Index>(3 * count + 40, 100));
  if (m <= count)
    throw std::invalid_argument("krylov dimension must exceed the requested count");
  const Index keep_max = std::min<Index>(m - 1, count + std::max<Index>(count, 15));

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss;
  auto random_vector = [&] {
    Eigen::VectorXd r(n);
    for (Index i = 0; i < n; ++i) r[i] = gauss(rng);
    return r;
  };

  Eigen::MatrixXd v(n, m), av(n, m);
  Eigen::VectorXd next = random_vector().normalized();
  Index kept = 0;
  Eigen::VectorXd theta;
  Eigen::MatrixXd ritz;
  Eigen::VectorXd res;

  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    for (Index j = kept; j < m; ++j) {
      v.col(j) = next;
      av.col(j) = a * next;
      Eigen::VectorXd w = av.col(j);
      orthogonalize(v, j + 1, w);
      double beta = w.norm();
      // invariant subspace found; continue with a fresh direction
      for (int tries = 0; beta < 1e-12 * (1.0 + av.col(j).norm()) && tries < 5; ++tries) {
        w = random_vector();
        orthogonalize(v, j + 1, w);
        beta = w.norm();
      }
      next = w / beta;
    }
    Eigen::MatrixXd t = v.transpose() * av;
    t = 0.5 * (t + t.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(t);
    theta = small.eigenvalues();
    const Eigen::MatrixXd& y = small.eigenvectors();

    ritz = v * y.leftCols(count);
    const Eigen::MatrixXd aritz = av * y.leftCols(count);
    res.resize(count);
    bool done = true;
    for (Index i = 0; i < count; ++i) {
      res[i] = (aritz.col(i) - theta[i] * ritz.col(i)).norm();
      if (res[i] > opt.residual_tol * std::max(1.0, std::abs(theta[i]))) done = false;
    }
    if (done) return package(h, theta.head(count), ritz);

    const Eigen::MatrixXd vk = v * y.leftCols(keep_max);
    const Eigen::MatrixXd avk = av * y.leftCols(keep_max);
    v.leftCols(keep_max) = vk;
    av.leftCols(keep_max) = avk;
    kept = keep_max;
    // `next` is orthogonal to the old basis and hence to the kept Ritz vectors.
  }

  std::ostringstream msg;
  msg << "iterative eigensolver did not converge after " << opt.max_restarts
      << " restarts; residuals:";
  for (Index i = 0; i < count; ++i) msg << ' ' << res[i];
  throw std::runtime_error(msg.str());
}

}  // namespace

void normalize_signs(Eigen::MatrixXd& vectors) {
  for (Index c = 0; c < vectors.cols(); ++c) {
    Index arg = 0;
    vectors.col(c).cwiseAbs().maxCoeff(&arg);
    if (vectors(arg, c) < 0.0) vectors.col(c) *= -1.0;
  }
}

EigenSystem reference_eigenpairs(const HamiltonianOperator& h, Index count,
                                 const EigenOptions& options) {
  const Index n = h.grid().size();
  if (count <= 0 || count > n)
    throw std::invalid_argument("requested " + std::to_string(count) +
                                " eigenpairs from a grid of " +
                                std::to_string(n) + " nodes");
  if (n <= options.dense_limit) return dense_eigenpairs(h, count, options.dense_limit);
  return lanczos_eigenpairs(h, count, options);
}

double spectral_gap(const EigenSystem& eigs, Index n) {
  if (n <= 0 || n + 1 > eigs.count())
    throw std::invalid_argument("spectral gap at N=" + std::to_string(n) +
                                " needs at least N+1 eigenpairs");
  return eigs.eigenvalues[n] - eigs.eigenvalues[n - 1];
}

}  // namespace cmlab
