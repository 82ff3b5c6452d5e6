#include "cmlab/regularizer.hpp"

#include <cmath>
#include <stdexcept>

namespace cmlab {

DiscreteFunction Regularizer::prox(const DiscreteFunction& u, double step) const {
  if (!(step > 0.0)) throw std::invalid_argument("prox step must be positive");
  DiscreteFunction out = u;
  prox_inplace(out.grid, out.values, step);
  return out;
}

double L1Regularizer::evaluate(const Grid& grid,
                               const Eigen::Ref<const Eigen::VectorXd>& values) const {
  return grid.weight() * values.lpNorm<1>();
}

void L1Regularizer::prox_inplace(const Grid&, Eigen::Ref<Eigen::MatrixXd> values,
                                 double step) const {
  values = values.unaryExpr([step](double x) { return soft_threshold(x, step); });
}

void L1Regularizer::subgradient_inplace(const Grid&,
                                        Eigen::Ref<Eigen::MatrixXd> values) const {
  values = values.unaryExpr([](double x) { return double((x > 0.0) - (x < 0.0)); });
}

double L1Regularizer::bound_constant(const Grid& grid) const {
  return std::sqrt(grid.measure());
}

RegularizerPtr make_regularizer(const std::string& name) {
  if (name == "l1") return std::make_shared<L1Regularizer>();
  if (name == "zero") return std::make_shared<ZeroRegularizer>();
  throw std::invalid_argument("unknown regularizer '" + name +
                              "' (expected l1 or zero)");
}

}  // namespace cmlab
