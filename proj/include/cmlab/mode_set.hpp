#pragma once

#include "cmlab/grid.hpp"

#include <Eigen/Core>

namespace cmlab {

/// N discrete functions on a common grid, stored column-wise (nodes x N).
///
/// Holds eigenfunctions, compressed modes, rotated frames and raw
/// (not yet orthonormal) stacks alike.
class ModeSet {
 public:
  ModeSet(Grid grid, Eigen::MatrixXd columns);

  const Grid& grid() const { return grid_; }
  Index count() const { return columns_.cols(); }
  const Eigen::MatrixXd& columns() const { return columns_; }
  Eigen::MatrixXd& columns() { return columns_; }

  DiscreteFunction column(Index i) const;

  /// Weighted Gram matrix <f_i, f_j>.
  Eigen::MatrixXd gram() const;
  /// max |<f_i, f_j> - delta_ij|
  double ortho_defect() const;

  /// The first n columns.
  ModeSet leading(Index n) const;

 private:
  Grid grid_;
  Eigen::MatrixXd columns_;
};

}  // namespace cmlab
