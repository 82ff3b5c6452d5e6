#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmlab {

using Index = Eigen::Index;

enum class Boundary { Dirichlet, Periodic };

std::string to_string(Boundary bc);
Boundary boundary_from_string(const std::string& name);

/// Uniform tensor grid on a box in 1 or 2 dimensions.
///
/// Dirichlet grids hold interior nodes only (boundary values are zero), so the
/// node spacing along an axis is extent / (points + 1). Periodic grids use
/// extent / points. Every node carries the same quadrature weight, chosen as
/// the box volume divided by the node count so constants integrate exactly.
class Grid {
 public:
  Grid(std::vector<double> extent, std::vector<int> points, Boundary boundary,
       std::vector<double> origin = {});

  /// The interval [origin, origin + length].
  static Grid interval(double length, int points, Boundary boundary,
                       double origin = 0.0);

  int dim() const { return static_cast<int>(extent_.size()); }
  const std::vector<double>& extent() const { return extent_; }
  const std::vector<double>& origin() const { return origin_; }
  const std::vector<int>& points() const { return points_; }
  const std::vector<double>& spacing() const { return spacing_; }
  Boundary boundary() const { return boundary_; }

  Index size() const { return size_; }
  double weight() const { return weight_; }
  Eigen::VectorXd weights() const {
    return Eigen::VectorXd::Constant(size_, weight_);
  }
  /// |Omega|
  double measure() const;

  /// Coordinate of a node along one axis. Nodes are numbered with axis 0
  /// running fastest.
  double coordinate(Index node, int axis) const;
  Index axis_index(Index node, int axis) const;

  bool operator==(const Grid& other) const = default;

 private:
  std::vector<double> extent_;
  std::vector<double> origin_;
  std::vector<int> points_;
  std::vector<double> spacing_;
  Boundary boundary_;
  Index size_ = 0;
  double weight_ = 0.0;
};

class GridMismatch : public std::invalid_argument {
 public:
  GridMismatch() : std::invalid_argument("functions live on different grids") {}
};

inline void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw GridMismatch();
}

/// Real scalar field sampled at the nodes of a grid.
struct DiscreteFunction {
  DiscreteFunction(Grid g, Eigen::VectorXd v);
  explicit DiscreteFunction(Grid g);  // zero function

  Grid grid;
  Eigen::VectorXd values;
};

double inner_product(const DiscreteFunction& u, const DiscreteFunction& v);
double l2_norm(const DiscreteFunction& u);
double l1_norm(const DiscreteFunction& u);

}  // namespace cmlab
