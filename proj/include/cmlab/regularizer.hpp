#pragma once

#include "cmlab/grid.hpp"

#include <Eigen/Core>

#include <memory>
#include <string>

namespace cmlab {

/// A nonnegative functional J on grid functions with J(g) <= C ||g||_2,
/// together with its proximal map under the weighted L2 metric.
class Regularizer {
 public:
  virtual ~Regularizer() = default;

  virtual std::string name() const = 0;

  /// J evaluated on raw node values living on `grid`.
  virtual double evaluate(const Grid& grid,
                          const Eigen::Ref<const Eigen::VectorXd>& values) const = 0;

  /// argmin_v step * J(v) + 1/2 ||v - u||_2^2, columnwise on node values.
  virtual void prox_inplace(const Grid& grid, Eigen::Ref<Eigen::MatrixXd> values,
                            double step) const = 0;

  /// Replaces node values with an element of the subdifferential of J
  /// (gradient taken in the weighted metric).
  virtual void subgradient_inplace(const Grid& grid,
                                   Eigen::Ref<Eigen::MatrixXd> values) const = 0;

  /// The constant C in J(g) <= C ||g||_2 on this grid.
  virtual double bound_constant(const Grid& grid) const = 0;

  double evaluate(const DiscreteFunction& u) const {
    return evaluate(u.grid, u.values);
  }
  DiscreteFunction prox(const DiscreteFunction& u, double step) const;
};

/// J(u) = sum_n w_n |u_n|. Its prox is a nodewise soft threshold at `step`
/// (the weight cancels against the weighted metric).
class L1Regularizer final : public Regularizer {
 public:
  using Regularizer::evaluate;
  std::string name() const override { return "l1"; }
  double evaluate(const Grid& grid,
                  const Eigen::Ref<const Eigen::VectorXd>& values) const override;
  void prox_inplace(const Grid& grid, Eigen::Ref<Eigen::MatrixXd> values,
                    double step) const override;
  void subgradient_inplace(const Grid& grid,
                           Eigen::Ref<Eigen::MatrixXd> values) const override;
  double bound_constant(const Grid& grid) const override;
};

/// J = 0, which reduces the problem to the plain eigenvalue problem.
class ZeroRegularizer final : public Regularizer {
 public:
  using Regularizer::evaluate;
  std::string name() const override { return "zero"; }
  double evaluate(const Grid&, const Eigen::Ref<const Eigen::VectorXd>&) const override {
    return 0.0;
  }
  void prox_inplace(const Grid&, Eigen::Ref<Eigen::MatrixXd>, double) const override {}
  void subgradient_inplace(const Grid&, Eigen::Ref<Eigen::MatrixXd> values) const override {
    values.setZero();
  }
  double bound_constant(const Grid&) const override { return 0.0; }
};

using RegularizerPtr = std::shared_ptr<const Regularizer>;

/// "l1" or "zero".
RegularizerPtr make_regularizer(const std::string& name);

/// sign(x) * max(|x| - threshold, 0)
inline double soft_threshold(double x, double threshold) {
  if (x > threshold) return x - threshold;
  if (x < -threshold) return x + threshold;
  return 0.0;
}

}  // namespace cmlab
