#pragma once

#include "cmlab/grid.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <filesystem>
#include <variant>
#include <vector>

namespace cmlab {

struct FreeParticle {};

/// V(x) = omega^2 |x - center|^2 / 2. An empty center means the box midpoint.
struct HarmonicWell {
  double omega = 1.0;
  std::vector<double> center;
};

/// Sum of negative Gaussian bumps, -depth * exp(-|x - c|^2 / (2 width^2)).
struct MultiWell {
  std::vector<std::vector<double>> centers;
  double depth = 1.0;
  double width = 1.0;
};

struct Tabulated {
  std::vector<double> values;
};

using Potential = std::variant<FreeParticle, HarmonicWell, MultiWell, Tabulated>;

/// Reads a single-column CSV of node values. Blank lines and lines starting
/// with '#' are skipped.
Tabulated load_tabulated_csv(const std::filesystem::path& path);

Eigen::VectorXd potential_values(const Grid& grid, const Potential& potential);

inline constexpr Index kDefaultDenseLimit = 4096;

/// H = -1/2 Laplacian + V on a grid, using the 3-point (1D) or 5-point (2D)
/// central stencil. Application is matrix-free.
class HamiltonianOperator {
 public:
  HamiltonianOperator(Grid grid, Potential potential);

  const Grid& grid() const { return grid_; }
  const Potential& potential() const { return potential_; }
  /// Diagonal of the discrete operator (stencil centre plus V).
  const Eigen::VectorXd& diagonal() const { return diagonal_; }
  /// Off-diagonal stencil coefficient per axis, -1 / (2 h^2).
  const std::vector<double>& coupling() const { return coupling_; }

  /// Node-value form, the same action as apply() without the grid check.
  void apply_to(const Eigen::Ref<const Eigen::MatrixXd>& in,
                Eigen::Ref<Eigen::MatrixXd> out) const;
  Eigen::MatrixXd apply_to(const Eigen::Ref<const Eigen::MatrixXd>& in) const;

  Eigen::SparseMatrix<double> sparse() const;

 private:
  Grid grid_;
  Potential potential_;
  Eigen::VectorXd diagonal_;
  std::vector<double> coupling_;
};

HamiltonianOperator build_hamiltonian(const Grid& grid,
                                      const Potential& potential);

DiscreteFunction apply(const HamiltonianOperator& h, const DiscreteFunction& u);

/// Dense symmetric matrix of H in node values. Throws when the grid has more
/// than `limit` nodes.
Eigen::MatrixXd materialize_dense(const HamiltonianOperator& h,
                                  Index limit = kDefaultDenseLimit);

}  // namespace cmlab
