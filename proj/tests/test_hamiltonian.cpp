#include "cmlab/eigensolver.hpp"
#include "cmlab/hamiltonian.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace cmlab;
using cmlab::testing::gaussian_vector;
using cmlab::testing::random_function;

TEST(Hamiltonian, FourNodeDirichletStencil) {
  const Grid g = Grid::interval(1.0, 4, Boundary::Dirichlet);
  const double h = 0.2;
  const Eigen::MatrixXd a = materialize_dense(build_hamiltonian(g, FreeParticle{}));
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    expected(i, i) = 1.0 / (h * h);
    if (i + 1 < 4) expected(i, i + 1) = expected(i + 1, i) = -0.5 / (h * h);
  }
  EXPECT_LT((a - expected).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Hamiltonian, PeriodicWrapFillsCorners) {
  const Grid g = Grid::interval(1.0, 5, Boundary::Periodic);
  const double h = 0.2;
  const Eigen::MatrixXd a = materialize_dense(build_hamiltonian(g, FreeParticle{}));
  EXPECT_DOUBLE_EQ(a(0, 4), -0.5 / (h * h));
  EXPECT_DOUBLE_EQ(a(4, 0), -0.5 / (h * h));
  EXPECT_DOUBLE_EQ(a(0, 2), 0.0);
  EXPECT_NEAR(a.rowwise().sum().cwiseAbs().maxCoeff(), 0.0, 1e-9);
}

TEST(Hamiltonian, HarmonicWellAddsHalfSquaredDistance) {
  const Grid g = Grid::interval(2.0, 9, Boundary::Dirichlet, -1.0);
  const auto free = build_hamiltonian(g, FreeParticle{});
  const auto well = build_hamiltonian(g, HarmonicWell{1.0, {}});
  for (Index i = 0; i < g.size(); ++i) {
    const double x = g.coordinate(i, 0);
    EXPECT_NEAR(well.diagonal()[i] - free.diagonal()[i], 0.5 * x * x, 1e-12);
  }
}

TEST(Hamiltonian, MultiWellIsNegativeGaussianSum) {
  const Grid g = Grid::interval(10.0, 49, Boundary::Dirichlet);
  const Eigen::VectorXd v = potential_values(g, MultiWell{{{3.0}, {7.0}}, 2.0, 0.5});
  for (Index i = 0; i < g.size(); ++i) {
    const double x = g.coordinate(i, 0);
    const double expected = -2.0 * (std::exp(-(x - 3) * (x - 3) / 0.5) +
                                     std::exp(-(x - 7) * (x - 7) / 0.5));
    EXPECT_NEAR(v[i], expected, 1e-14);
  }
}

TEST(Hamiltonian, TabulatedPotentialValidation) {
  const Grid g = Grid::interval(1.0, 3, Boundary::Dirichlet);
  EXPECT_THROW(build_hamiltonian(g, Tabulated{{1.0, 2.0}}), std::invalid_argument);
  EXPECT_THROW(build_hamiltonian(g, Tabulated{{1.0, NAN, 2.0}}), std::invalid_argument);
  const auto h = build_hamiltonian(g, Tabulated{{1.0, 2.0, 3.0}});
  EXPECT_DOUBLE_EQ(h.diagonal()[2] - h.diagonal()[0], 2.0);
}

TEST(Hamiltonian, TabulatedCsvLoader) {
  const auto path = std::filesystem::temp_directory_path() / "cmlab_potential_test.csv";
  {
    std::ofstream out(path);
    out << "# node values\n0.5\n\n-1.25\n3\n";
  }
  EXPECT_EQ(load_tabulated_csv(path).values, (std::vector<double>{0.5, -1.25, 3.0}));
  {
    std::ofstream out(path);
    out << "0.5\nabc\n";
  }
  EXPECT_THROW(load_tabulated_csv(path), std::runtime_error);
  std::filesystem::remove(path);
  EXPECT_THROW(load_tabulated_csv(path), std::runtime_error);
}

TEST(Apply, ZeroMapsToZero) {
  const Grid g({1.0, 2.0}, {5, 6}, Boundary::Periodic);
  const auto h = build_hamiltonian(g, HarmonicWell{2.0, {}});
  EXPECT_EQ(l2_norm(apply(h, DiscreteFunction(g))), 0.0);
}

TEST(Apply, DirichletSineEigenRelation) {
  const int n = 200;
  const Grid g = Grid::interval(1.0, n, Boundary::Dirichlet);
  const double h = 1.0 / (n + 1);
  const auto op = build_hamiltonian(g, FreeParticle{});
  for (int k : {1, 2, 7, 50}) {
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) u[i] = std::sin(k * M_PI * g.coordinate(i, 0));
    const Eigen::VectorXd hu = apply(op, {g, u}).values;
    const double lambda = (1.0 - std::cos(k * M_PI * h)) / (h * h);
    EXPECT_LT((hu - lambda * u).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, lambda));
  }
}

TEST(Apply, TwoDimensionalProductEigenRelation) {
  const Grid g({1.0, 2.0}, {15, 20}, Boundary::Dirichlet);
  const auto op = build_hamiltonian(g, FreeParticle{});
  const double hx = g.spacing()[0], hy = g.spacing()[1];
  Eigen::VectorXd u(g.size());
  for (Index i = 0; i < g.size(); ++i)
    u[i] = std::sin(2 * M_PI * g.coordinate(i, 0)) * std::sin(3 * M_PI * g.coordinate(i, 1) / 2);
  const double lambda = (1 - std::cos(2 * M_PI * hx)) / (hx * hx) +
                        (1 - std::cos(3 * M_PI * hy / 2)) / (hy * hy);
  EXPECT_LT((apply(op, {g, u}).values - lambda * u).cwiseAbs().maxCoeff(), 1e-10 * lambda);
}

TEST(Apply, GridMismatchThrows) {
  const auto op = build_hamiltonian(Grid::interval(1.0, 8, Boundary::Dirichlet), FreeParticle{});
  EXPECT_THROW(apply(op, DiscreteFunction(Grid::interval(1.0, 9, Boundary::Dirichlet))),
               GridMismatch);
}

TEST(Dense, SymmetricAndMatchesApply) {
  const Grid g({3.0, 2.0}, {9, 11}, Boundary::Periodic);
  const auto op = build_hamiltonian(g, MultiWell{{{1.0, 1.0}}, 3.0, 0.4});
  const Eigen::MatrixXd a = materialize_dense(op);
  EXPECT_EQ((a - a.transpose()).cwiseAbs().maxCoeff(), 0.0);
  for (int s = 0; s < 20; ++s) {
    const auto u = random_function(g, 500 + s);
    const Eigen::VectorXd hu = apply(op, u).values;
    EXPECT_LT((a * u.values - hu).cwiseAbs().maxCoeff(), 1e-12 * a.cwiseAbs().maxCoeff());
    const double form = g.weight() * u.values.dot(a * u.values);
    EXPECT_NEAR(inner_product(u, apply(op, u)), form, 1e-12 * std::abs(form));
  }
}

TEST(Dense, LimitEnforced) {
  const auto op = build_hamiltonian(Grid::interval(1.0, 100, Boundary::Dirichlet), FreeParticle{});
  EXPECT_THROW(materialize_dense(op, 99), std::length_error);
  EXPECT_NO_THROW(materialize_dense(op, 100));
}

TEST(Hamiltonian, SecondOrderConvergence) {
  auto lowest = [](int n) {
    const Grid g = Grid::interval(1.0, n, Boundary::Dirichlet);
    return reference_eigenpairs(build_hamiltonian(g, FreeParticle{}), 1).eigenvalues[0];
  };
  const double exact = M_PI * M_PI / 2;
  const double e1 = std::abs(lowest(63) - exact), e2 = std::abs(lowest(127) - exact);
  EXPECT_NEAR(e1 / e2, 4.0, 0.1);
}

class HamiltonianProperties : public ::testing::TestWithParam<int> {};

TEST_P(HamiltonianProperties, SymmetricAndLinear) {
  const std::uint64_t s = 7000 + static_cast<std::uint64_t>(GetParam());
  const Grid g = (s % 2) ? Grid::interval(1.0, 41, Boundary::Dirichlet)
                         : Grid({1.0, 1.0}, {7, 5}, Boundary::Periodic);
  const Eigen::VectorXd v0 = gaussian_vector(g.size(), s);
  const auto op = build_hamiltonian(g, Tabulated{{v0.data(), v0.data() + v0.size()}});
  const auto u = random_function(g, s + 1), v = random_function(g, s + 2);
  const double uhv = inner_product(u, apply(op, v)), huv = inner_product(apply(op, u), v);
  EXPECT_NEAR(uhv, huv, 1e-10 * std::max(std::abs(uhv), 1.0));

  const double a = 0.3 + GetParam() * 0.01, b = -2.0;
  const Eigen::VectorXd lhs = apply(op, {g, a * u.values + b * v.values}).values;
  const Eigen::VectorXd rhs = a * apply(op, u).values + b * apply(op, v).values;
  EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12 * rhs.cwiseAbs().maxCoeff());
}

INSTANTIATE_TEST_SUITE_P(Seeds, HamiltonianProperties, ::testing::Range(0, 100));
