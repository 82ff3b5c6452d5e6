#include "cmlab/mode_set.hpp"

#include <stdexcept>

namespace cmlab {

ModeSet::ModeSet(Grid grid, Eigen::MatrixXd columns)
    : grid_(std::move(grid)), columns_(std::move(columns)) {
  if (columns_.rows() != grid_.size())
    throw std::invalid_argument("mode rows do not match grid node count");
}

DiscreteFunction ModeSet::column(Index i) const {
  return DiscreteFunction(grid_, columns_.col(i));
}

Eigen::MatrixXd ModeSet::gram() const {
  return grid_.weight() * (columns_.transpose() * columns_);
}

double ModeSet::ortho_defect() const {
  if (count() == 0) return 0.0;
  const Eigen::MatrixXd g = gram();
  return (g - Eigen::MatrixXd::Identity(count(), count()))
      .cwiseAbs()
      .maxCoeff();
}

ModeSet ModeSet::leading(Index n) const {
  if (n > count()) throw std::invalid_argument("not enough modes");
  return ModeSet(grid_, columns_.leftCols(n));
}

}  // namespace cmlab
