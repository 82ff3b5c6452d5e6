#pragma once

#include "cmlab/cm_solver.hpp"
#include "cmlab/grid.hpp"
#include "cmlab/hamiltonian.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmlab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DomainConfig {
  std::vector<double> extent;
  std::vector<int> points;
  Boundary boundary = Boundary::Dirichlet;
  std::vector<double> origin;  // empty: zeros

  Grid grid() const;
  bool operator==(const DomainConfig&) const = default;
};

struct PotentialConfig {
  std::string kind = "free";  // free | harmonic | multiwell | tabulated
  double omega = 1.0;
  std::vector<double> center;  // harmonic; empty: box midpoint
  std::vector<std::vector<double>> centers;  // multiwell
  double depth = 1.0;
  double width = 1.0;
  std::string path;            // tabulated, as written in the file
  std::vector<double> values;  // tabulated, inline or loaded from `path`

  Potential potential() const;
  bool operator==(const PotentialConfig&) const = default;
};

struct ProblemConfig {
  int modes = 1;  // N
  std::string regularizer = "l1";
  std::optional<double> mu;
  std::vector<double> mu_schedule;

  bool operator==(const ProblemConfig&) const = default;
};

struct SolverBlock {
  std::optional<double> penalty;
  int max_iters = 10000;
  double tol = 1e-7;
  /// Unset: "eigen" plus random_starts seeded from the experiment seed.
  std::optional<std::vector<std::string>> starts;
  int random_starts = 2;
  Index dense_limit = kDefaultDenseLimit;

  bool operator==(const SolverBlock&) const = default;
};

struct OutputConfig {
  std::string dir = ".";
  std::vector<std::string> formats{"csv", "json"};
  bool trace = false;

  bool wants(const std::string& format) const;
  bool operator==(const OutputConfig&) const = default;
};

/// One experiment, read from a JSON file. Unknown keys are rejected.
struct ExperimentConfig {
  DomainConfig domain;
  PotentialConfig potential;
  ProblemConfig problem;
  SolverBlock solver;
  OutputConfig output;
  std::uint64_t seed = 0;

  /// Solver settings for a given mu, with start strategies resolved.
  SolverConfig solver_config(double mu) const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// `base_dir` resolves relative tabulated-potential paths.
ExperimentConfig parse_config(const nlohmann::json& doc,
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace cmlab
