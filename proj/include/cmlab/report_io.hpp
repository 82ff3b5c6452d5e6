#pragma once

#include "cmlab/cm_solver.hpp"
#include "cmlab/consistency.hpp"
#include "cmlab/eigensolver.hpp"
#include "cmlab/mode_set.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace cmlab {

/// Shortest decimal form that reads back to the same double.
std::string format_number(double x);

/// Writes to a sibling temporary file, then renames over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// index,lambda,residual (1-based index)
std::string eigs_csv(const EigenSystem& eigs);

/// Comment lines with grid metadata, a header f_1..f_N, then one row per node.
std::string modes_csv(const ModeSet& modes);

/// iter,objective,ortho_defect
std::string trace_csv(const std::vector<TraceRow>& trace);

/// mu,E,E0,energy_gap,nu_1..nu_N,max_eig_dev,procrustes_residual,ortho_defect,iterations,converged
std::string sweep_csv(const SweepReport& report);

nlohmann::json sweep_json(const SweepReport& report);
nlohmann::json solve_json(const SolverResult& result, double mu, double energy,
                          double ground_energy, const Eigen::VectorXd& widths);

}  // namespace cmlab
