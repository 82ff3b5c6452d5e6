#include "cmlab/cm_solver.hpp"
#include "cmlab/consistency.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace cmlab;
using cmlab::testing::gaussian_matrix;
using cmlab::testing::random_rotation;

namespace {

struct System {
  HamiltonianOperator h;
  EigenSystem eigs;
};

System box(int n, Index count, Boundary bc = Boundary::Dirichlet) {
  auto h = build_hamiltonian(Grid::interval(1.0, n, bc), FreeParticle{});
  auto eigs = reference_eigenpairs(h, count);
  return {std::move(h), std::move(eigs)};
}

ModeSet rotate(const ModeSet& f, const Eigen::MatrixXd& r) {
  return ModeSet(f.grid(), f.columns() * r);
}

}  // namespace

TEST(InteractionMatrix, EigenfunctionsGiveDiagonal) {
  const System s = box(100, 3);
  const Eigen::MatrixXd m = interaction_matrix(s.h, s.eigs.modes);
  EXPECT_LT((m - Eigen::MatrixXd(s.eigs.eigenvalues.asDiagonal())).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_EQ(m, m.transpose());
}

TEST(InteractionMatrix, RotationInvariantSpectrum) {
  const System s = box(100, 4);
  const Eigen::MatrixXd u = random_rotation(4, 3);
  const Eigen::MatrixXd m = interaction_matrix(s.h, rotate(s.eigs.modes, u));
  EXPECT_LT((m - u.transpose() * s.eigs.eigenvalues.asDiagonal() * u).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT((nu_spectrum(m) - s.eigs.eigenvalues).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(InteractionMatrix, RayleighQuotientAboveGround) {
  const System s = box(80, 1);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ModeSet f = random_orthonormal_frame(s.h.grid(), 1, seed);
    const Eigen::MatrixXd m = interaction_matrix(s.h, f);
    ASSERT_EQ(m.rows(), 1);
    EXPECT_GE(m(0, 0), s.eigs.eigenvalues[0] - 1e-8);
    EXPECT_NEAR(m(0, 0), energy(s.h, f), 1e-9 * m(0, 0));
  }
}

TEST(InteractionMatrix, RejectsNonOrthonormalFrame) {
  const System s = box(20, 2);
  EXPECT_THROW(interaction_matrix(s.h, ModeSet(s.h.grid(), 2 * s.eigs.modes.columns())),
               std::invalid_argument);
}

TEST(NuSpectrum, SortedAndTraceConsistent) {
  EXPECT_EQ(nu_spectrum(Eigen::Vector3d(3, 1, 2).asDiagonal().toDenseMatrix()),
            Eigen::Vector3d(1, 2, 3));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Eigen::MatrixXd g = gaussian_matrix(6, 6, seed);
    const Eigen::MatrixXd m = g + g.transpose();
    const Eigen::VectorXd nu = nu_spectrum(m);
    EXPECT_NEAR(nu.sum(), m.trace(), 1e-10);
    for (Index i = 1; i < 6; ++i) EXPECT_LE(nu[i - 1], nu[i]);
  }
  EXPECT_THROW(nu_spectrum(Eigen::MatrixXd(2, 3)), std::invalid_argument);
}

TEST(TraceIdentity, HoldsForRandomFrames) {
  const System s = box(120, 3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ModeSet f = random_orthonormal_frame(s.h.grid(), 3, seed);
    const Eigen::VectorXd nu = nu_spectrum(interaction_matrix(s.h, f));
    EXPECT_NEAR(nu.sum(), energy(s.h, f), 1e-10 * std::abs(nu.sum()));
    EXPECT_GE(nu.minCoeff(), s.eigs.eigenvalues[0] - 1e-8);
    EXPECT_GE(nu.sum(), s.eigs.energy_sum(3) - 1e-8);
  }
}

TEST(Procrustes, IdentityAlignment) {
  const System s = box(60, 3);
  const ProcrustesResult p = procrustes_align(s.eigs.modes, s.eigs.modes);
  EXPECT_LT((p.rotation - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT(p.residual, 1e-10);
}

TEST(Procrustes, RecoversRandomRotation) {
  const System s = box(60, 4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Eigen::MatrixXd r = random_rotation(4, seed);
    const ProcrustesResult p = procrustes_align(rotate(s.eigs.modes, r), s.eigs.modes);
    EXPECT_LT((p.rotation - r).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LE(p.residual, 1e-8);
  }
}

TEST(Procrustes, MisalignedModeResidual) {
  const System s = box(60, 4);
  const ModeSet phi = s.eigs.modes.leading(3);
  Eigen::MatrixXd cols = phi.columns();
  cols.col(2) = s.eigs.modes.columns().col(3);
  const ProcrustesResult p = procrustes_align(ModeSet(phi.grid(), cols), phi);
  // f_3 is orthogonal to span(phi): ||f_3 - phi'_3||^2 = 1 + ||phi'_3||^2 = 2.
  EXPECT_NEAR(p.residual, std::sqrt(2.0), 1e-8);
  EXPECT_GE(p.residual, 1.0);
}

TEST(Procrustes, BeatsRandomRotations) {
  const System s = box(80, 3);
  const ModeSet f = random_orthonormal_frame(s.h.grid(), 3, 8);
  const ModeSet phi = s.eigs.modes;
  // Mix f towards the eigenspace so the alignment problem is non-trivial.
  const ModeSet target =
      orthonormalize(ModeSet(f.grid(), phi.columns() * random_rotation(3, 2) + 0.3 * f.columns()));
  const ProcrustesResult p = procrustes_align(target, phi);
  const double sw = std::sqrt(f.grid().weight());
  const double best_sq = sw * sw * (target.columns() - p.aligned.columns()).squaredNorm();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const ModeSet other = rotate(phi, random_rotation(3, 100 + seed));
    const double sq = sw * sw * (target.columns() - other.columns()).squaredNorm();
    EXPECT_LE(best_sq, sq + 1e-12);
    double worst = 0.0;
    for (Index i = 0; i < 3; ++i)
      worst = std::max(worst, sw * (target.columns().col(i) - other.columns().col(i)).norm());
    EXPECT_LE(p.residual, worst + 1e-12);
  }
}

TEST(Procrustes, OrthogonalSpansHaveNoAlignment) {
  const System s = box(40, 4);
  const ModeSet a = s.eigs.modes.leading(2);
  const ModeSet b(a.grid(), s.eigs.modes.columns().rightCols(2));
  EXPECT_THROW(procrustes_align(b, a), std::domain_error);
}

TEST(Coefficients, EigenfunctionsGiveIdentity) {
  const System s = box(50, 3);
  const CoeffMatrix c = coefficients(s.eigs.modes, s.eigs, 3);
  EXPECT_LT((c.entries - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((c.col_mass.array() - 1.0).abs().maxCoeff(), 1e-10);
  EXPECT_LT(c.tail_mass.cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Coefficients, RotatedFrameHasUnitColumnMass) {
  const System s = box(50, 5);
  const ModeSet f = rotate(s.eigs.modes.leading(3), random_rotation(3, 4));
  const CoeffMatrix c = coefficients(f, s.eigs, 5);
  EXPECT_LT((c.col_mass.head(3).array() - 1.0).abs().maxCoeff(), 1e-10);
  EXPECT_LT(c.col_mass.tail(2).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Coefficients, FullDepthMassesSumToN) {
  const int n = 40;
  const System s = box(n, n);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ModeSet f = random_orthonormal_frame(s.h.grid(), 4, seed);
    const CoeffMatrix c = coefficients(f, s.eigs, n);
    EXPECT_NEAR(c.col_mass.sum(), 4.0, 1e-10);
    EXPECT_LE(c.col_mass.maxCoeff(), 1.0 + 1e-10);
    EXPECT_GE(c.col_mass.minCoeff(), 0.0);
    EXPECT_LT(c.tail_mass.cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Coefficients, TruncatedDepthKeepsRowNormalization) {
  const System s = box(60, 8);
  const ModeSet f = random_orthonormal_frame(s.h.grid(), 3, 21);
  const CoeffMatrix c = coefficients(f, s.eigs, 8);
  const Eigen::VectorXd rows = c.entries.array().square().rowwise().sum();
  EXPECT_LT((rows + c.tail_mass - Eigen::VectorXd::Ones(3)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE(c.col_mass.sum(), 3.0 + 1e-10);
  EXPECT_THROW(coefficients(f, s.eigs, 9), std::invalid_argument);
}

TEST(GapBound, ZeroForEigenfunctions) {
  const System s = box(50, 4);
  const ModeSet phi = s.eigs.modes.leading(3);
  EXPECT_NEAR(gap_lower_bound(coefficients(phi, s.eigs, 4), s.eigs, 3), 0.0, 1e-10);
}

TEST(GapBound, HoldsForFramesInLowSpan) {
  const System s = box(200, 13);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Index n = 1 + static_cast<Index>(seed % 3);
    const ModeSet f = random_frame_in_span(s.eigs, n, 4 * n, seed);
    ASSERT_LE(f.ortho_defect(), 1e-10);
    const double bound = gap_lower_bound(coefficients(f, s.eigs, 4 * n), s.eigs, n);
    EXPECT_LE(bound, std::abs(energy(s.h, f) - s.eigs.energy_sum(n)) + 1e-8);
  }
}

TEST(GapBound, DegeneratePairHidesLargeResidual) {
  const System s = box(128, 3, Boundary::Periodic);
  // f = (phi_1, phi_3) where lambda_2 = lambda_3.
  Eigen::MatrixXd cols(s.h.grid().size(), 2);
  cols << s.eigs.modes.columns().col(0), s.eigs.modes.columns().col(2);
  const ModeSet f(s.h.grid(), cols);
  const CoeffMatrix c = coefficients(f, s.eigs, 3);
  EXPECT_NEAR(c.col_mass[1], 0.0, 1e-10);
  EXPECT_NEAR(gap_lower_bound(c, s.eigs, 2), 0.0, 1e-8);
  const ModeSet phi = s.eigs.modes.leading(2);
  EXPECT_NEAR(procrustes_align(f, phi).residual, std::sqrt(2.0), 1e-8);
}

TEST(GapBound, RejectsImpossibleMasses) {
  const System s = box(30, 3);
  CoeffMatrix c;
  c.col_mass = Eigen::Vector2d(1.5, 1.0);
  EXPECT_THROW(gap_lower_bound(c, s.eigs, 2), std::logic_error);
  EXPECT_THROW(gap_lower_bound(c, s.eigs, 3), std::invalid_argument);
}

TEST(ColumnMass, SquareDrawIsOrthogonal) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Eigen::MatrixXd a = random_semi_unitary(6, 6, seed);
    EXPECT_LT((a.array().square().colwise().sum() - 1.0).abs().maxCoeff(), 1e-12);
  }
}

TEST(ColumnMass, SingleRowIsUnitVector) {
  const Eigen::MatrixXd a = random_semi_unitary(1, 30, 5);
  EXPECT_NEAR(a.norm(), 1.0, 1e-12);
  EXPECT_LE(column_mass_lemma_check(1, 30, 5), 1.0);
}

TEST(ColumnMass, ThousandDrawsBelowOne) {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Eigen::MatrixXd a = random_semi_unitary(5, 40, seed);
    EXPECT_LT((a * a.transpose() - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-12);
    worst = std::max(worst, column_mass_lemma_check(5, 40, seed));
  }
  EXPECT_LE(worst, 1.0 + 1e-10);
  EXPECT_THROW(random_semi_unitary(5, 4, 0), std::invalid_argument);
}

TEST(Localization, FlatProfileWidth) {
  const Grid g = Grid::interval(1.0, 100, Boundary::Dirichlet);
  Eigen::MatrixXd cols = Eigen::MatrixXd::Zero(100, 1);
  cols.block(20, 0, 15, 1).setConstant(1.0);
  EXPECT_NEAR(localization(ModeSet(g, cols))[0], 15 * g.weight(), 1e-12);
  EXPECT_THROW(localization(ModeSet(g, Eigen::MatrixXd::Zero(100, 1))), std::invalid_argument);
}

TEST(Localization, SineModeWidthTwoThirds) {
  const System s = box(1000, 2);
  const Eigen::VectorXd w = localization(s.eigs.modes);
  EXPECT_NEAR(w[0], 2.0 / 3.0, 2e-3);
  EXPECT_NEAR(w[1], 2.0 / 3.0, 2e-3);
}

TEST(MuSweep, UnregularizedSweepStaysOnEigenfunctions) {
  const auto h = build_hamiltonian(Grid::interval(1.0, 100, Boundary::Dirichlet), FreeParticle{});
  SolverConfig c = default_solver_config(1.0, 3, 1);
  c.max_iters = 500;
  const SweepReport r = mu_sweep(h, ZeroRegularizer(), 2, {1.0, 10.0, 100.0}, c);
  ASSERT_EQ(r.records.size(), 3u);
  for (const auto& rec : r.records) {
    EXPECT_LE(rec.energy_gap, 1e-8);
    EXPECT_LE(rec.procrustes_residual, 1e-6);
    EXPECT_NEAR(rec.nu.sum(), rec.energy, 1e-10 * rec.energy);
  }
  EXPECT_EQ(r.monotone_energy, Verdict::Pass);
  EXPECT_EQ(r.eig_convergence, Verdict::Pass);
  EXPECT_EQ(r.l2_convergence, Verdict::Pass);
  EXPECT_EQ(r.records[1].starts.back().label, "warm");
}

TEST(MuSweep, SingleMuGivesNotApplicable) {
  const auto h = build_hamiltonian(Grid::interval(1.0, 64, Boundary::Dirichlet), FreeParticle{});
  SolverConfig c = default_solver_config(1.0, 3, 0);
  c.max_iters = 300;
  const SweepReport r = mu_sweep(h, L1Regularizer(), 1, {20.0}, c);
  EXPECT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.monotone_energy, Verdict::NotApplicable);
  EXPECT_EQ(to_string(r.eig_convergence), "N/A");
}

TEST(MuSweep, DegenerateGapFlagged) {
  const auto h = build_hamiltonian(Grid::interval(1.0, 64, Boundary::Periodic), FreeParticle{});
  SolverConfig c = default_solver_config(1.0, 3, 0);
  c.max_iters = 300;
  const SweepReport r = mu_sweep(h, L1Regularizer(), 2, {5.0, 50.0}, c);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.l2_convergence, Verdict::Degenerate);
  EXPECT_EQ(to_string(r.monotone_energy), "DEGENERATE");
}

TEST(MuSweep, RejectsBadSchedules) {
  const auto h = build_hamiltonian(Grid::interval(1.0, 16, Boundary::Dirichlet), FreeParticle{});
  const SolverConfig c;
  EXPECT_THROW(mu_sweep(h, L1Regularizer(), 1, {}, c), std::invalid_argument);
  EXPECT_THROW(mu_sweep(h, L1Regularizer(), 1, {2.0, 1.0}, c), std::invalid_argument);
  EXPECT_THROW(mu_sweep(h, L1Regularizer(), 1, {-1.0}, c), std::invalid_argument);
}
