#pragma once

#include "cmlab/grid.hpp"
#include "cmlab/mode_set.hpp"

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <random>

namespace cmlab::testing {

inline Eigen::VectorXd gaussian_vector(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

inline Eigen::MatrixXd gaussian_matrix(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) m(r, c) = g(rng);
  return m;
}

inline DiscreteFunction random_function(const Grid& grid, std::uint64_t seed) {
  return {grid, gaussian_vector(grid.size(), seed)};
}

inline DiscreteFunction sampled(const Grid& grid, double (*f)(double)) {
  Eigen::VectorXd v(grid.size());
  for (Index i = 0; i < grid.size(); ++i) v[i] = f(grid.coordinate(i, 0));
  return {grid, v};
}

/// Orthogonal matrix from the QR factor of a Gaussian draw.
Eigen::MatrixXd random_rotation(Index n, std::uint64_t seed);

}  // namespace cmlab::testing
