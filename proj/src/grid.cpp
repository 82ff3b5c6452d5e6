#include "cmlab/grid.hpp"

#include <cmath>
#include <numeric>

namespace cmlab {

std::string to_string(Boundary bc) {
  return bc == Boundary::Dirichlet ? "dirichlet" : "periodic";
}

Boundary boundary_from_string(const std::string& name) {
  if (name == "dirichlet") return Boundary::Dirichlet;
  if (name == "periodic") return Boundary::Periodic;
  throw std::invalid_argument("unknown boundary condition '" + name +
                              "' (expected dirichlet or periodic)");
}

Grid::Grid(std::vector<double> extent, std::vector<int> points,
           Boundary boundary, std::vector<double> origin)
    : extent_(std::move(extent)),
      origin_(std::move(origin)),
      points_(std::move(points)),
      boundary_(boundary) {
  if (extent_.empty() || extent_.size() > 2)
    throw std::invalid_argument("grid dimension must be 1 or 2");
  if (points_.size() != extent_.size())
    throw std::invalid_argument("grid needs one point count per axis");
  if (origin_.empty()) origin_.assign(extent_.size(), 0.0);
  if (origin_.size() != extent_.size())
    throw std::invalid_argument("grid needs one origin coordinate per axis");

  size_ = 1;
  weight_ = 1.0;
  for (std::size_t a = 0; a < extent_.size(); ++a) {
    if (!(extent_[a] > 0.0) || !std::isfinite(extent_[a]))
      throw std::invalid_argument("grid extent must be positive and finite");
    if (points_[a] <= 0)
      throw std::invalid_argument("grid points per axis must be positive");
    const int cells =
        boundary_ == Boundary::Dirichlet ? points_[a] + 1 : points_[a];
    spacing_.push_back(extent_[a] / cells);
    weight_ *= extent_[a] / points_[a];
    size_ *= points_[a];
  }
}

Grid Grid::interval(double length, int points, Boundary boundary,
                    double origin) {
  return Grid({length}, {points}, boundary, {origin});
}

double Grid::measure() const {
  return std::accumulate(extent_.begin(), extent_.end(), 1.0,
                         std::multiplies<>());
}

Index Grid::axis_index(Index node, int axis) const {
  return axis == 0 ? node % points_[0] : node / points_[0];
}

double Grid::coordinate(Index node, int axis) const {
  const Index i = axis_index(node, axis);
  const double shift = boundary_ == Boundary::Dirichlet ? 1.0 : 0.0;
  return origin_[axis] + (static_cast<double>(i) + shift) * spacing_[axis];
}

DiscreteFunction::DiscreteFunction(Grid g, Eigen::VectorXd v)
    : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size())
    throw std::invalid_argument("value count does not match grid node count");
}

DiscreteFunction::DiscreteFunction(Grid g)
    : grid(std::move(g)), values(Eigen::VectorXd::Zero(grid.size())) {}

double inner_product(const DiscreteFunction& u, const DiscreteFunction& v) {
  require_same_grid(u.grid, v.grid);
  return u.grid.weight() * u.values.dot(v.values);
}

double l2_norm(const DiscreteFunction& u) {
  return std::sqrt(u.grid.weight()) * u.values.stableNorm();
}

double l1_norm(const DiscreteFunction& u) {
  return u.grid.weight() * u.values.lpNorm<1>();
}

}  // namespace cmlab
