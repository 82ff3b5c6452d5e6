#include "cmlab/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace cmlab {
namespace {

using nlohmann::json;

void reject_unknown(const json& block, const std::string& where,
                    const std::set<std::string>& allowed) {
  if (!block.is_object()) throw ConfigError("'" + where + "' must be an object");
  for (const auto& [key, _] : block.items())
    if (!allowed.count(key))
      throw ConfigError("unknown key '" + key + "' in '" + where + "'");
}

const json& require(const json& doc, const std::string& key, const std::string& where) {
  if (!doc.contains(key))
    throw ConfigError("missing required " + std::string(where.empty() ? "block" : "key") +
                      " '" + key + "'" + (where.empty() ? "" : " in '" + where + "'"));
  return doc.at(key);
}

template <class T>
T get(const json& doc, const std::string& key, const std::string& where) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + where + "." + key + "': " + e.what());
  }
}

template <class T>
void read_opt(const json& doc, const std::string& key, const std::string& where, T& out) {
  if (doc.contains(key)) out = get<T>(doc, key, where);
}

DomainConfig parse_domain(const json& d) {
  reject_unknown(d, "domain", {"dim", "extent", "points", "boundary", "origin"});
  DomainConfig c;
  for (const char* key : {"extent", "points", "boundary"}) require(d, key, "domain");
  c.extent = get<std::vector<double>>(d, "extent", "domain");
  c.points = get<std::vector<int>>(d, "points", "domain");
  try {
    c.boundary = boundary_from_string(get<std::string>(d, "boundary", "domain"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  read_opt(d, "origin", "domain", c.origin);
  if (d.contains("dim") && get<int>(d, "dim", "domain") != static_cast<int>(c.extent.size()))
    throw ConfigError("domain.dim does not match the length of domain.extent");
  try {
    (void)c.grid();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid domain: ") + e.what());
  }
  return c;
}

PotentialConfig parse_potential(const json& p, const std::filesystem::path& base_dir) {
  PotentialConfig c;
  if (!p.is_object()) throw ConfigError("'potential' must be an object");
  require(p, "kind", "potential");
  c.kind = get<std::string>(p, "kind", "potential");
  if (c.kind == "free") {
    reject_unknown(p, "potential", {"kind"});
  } else if (c.kind == "harmonic") {
    reject_unknown(p, "potential", {"kind", "omega", "center"});
    read_opt(p, "omega", "potential", c.omega);
    read_opt(p, "center", "potential", c.center);
  } else if (c.kind == "multiwell") {
    reject_unknown(p, "potential", {"kind", "centers", "depth", "width"});
    require(p, "centers", "potential");
    c.centers = get<std::vector<std::vector<double>>>(p, "centers", "potential");
    read_opt(p, "depth", "potential", c.depth);
    read_opt(p, "width", "potential", c.width);
  } else if (c.kind == "tabulated") {
    reject_unknown(p, "potential", {"kind", "path", "values"});
    if (p.contains("path") == p.contains("values"))
      throw ConfigError("tabulated potential needs exactly one of 'path' or 'values'");
    if (p.contains("path")) {
      c.path = get<std::string>(p, "path", "potential");
      std::filesystem::path file(c.path);
      if (file.is_relative()) file = base_dir / file;
      try {
        c.values = load_tabulated_csv(file).values;
      } catch (const std::runtime_error& e) {
        throw ConfigError(e.what());
      }
    } else {
      c.values = get<std::vector<double>>(p, "values", "potential");
    }
  } else {
    throw ConfigError("unknown potential kind '" + c.kind +
                      "' (expected free, harmonic, multiwell or tabulated)");
  }
  return c;
}

ProblemConfig parse_problem(const json& p) {
  reject_unknown(p, "problem", {"N", "regularizer", "mu", "mu_schedule"});
  ProblemConfig c;
  require(p, "N", "problem");
  c.modes = get<int>(p, "N", "problem");
  if (c.modes <= 0) throw ConfigError("problem.N must be positive");
  read_opt(p, "regularizer", "problem", c.regularizer);
  if (c.regularizer != "l1" && c.regularizer != "zero")
    throw ConfigError("problem.regularizer must be \"l1\" or \"zero\"");
  if (p.contains("mu")) {
    c.mu = get<double>(p, "mu", "problem");
    if (!(*c.mu > 0.0)) throw ConfigError("problem.mu must be positive");
  }
  read_opt(p, "mu_schedule", "problem", c.mu_schedule);
  for (std::size_t k = 0; k < c.mu_schedule.size(); ++k) {
    if (!(c.mu_schedule[k] > 0.0)) throw ConfigError("problem.mu_schedule values must be positive");
    if (k > 0 && !(c.mu_schedule[k] > c.mu_schedule[k - 1]))
      throw ConfigError("problem.mu_schedule must be strictly ascending");
  }
  return c;
}

SolverBlock parse_solver(const json& s) {
  reject_unknown(s, "solver",
                 {"penalty", "max_iters", "tol", "starts", "random_starts", "dense_limit"});
  SolverBlock c;
  if (s.contains("penalty") && !s.at("penalty").is_null()) {
    c.penalty = get<double>(s, "penalty", "solver");
    if (!(*c.penalty > 0.0)) throw ConfigError("solver.penalty must be positive");
  }
  read_opt(s, "max_iters", "solver", c.max_iters);
  read_opt(s, "tol", "solver", c.tol);
  read_opt(s, "random_starts", "solver", c.random_starts);
  read_opt(s, "dense_limit", "solver", c.dense_limit);
  if (s.contains("starts")) {
    c.starts = get<std::vector<std::string>>(s, "starts", "solver");
    for (const auto& st : *c.starts) {
      try {
        (void)parse_start(st);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    if (c.starts->empty()) throw ConfigError("solver.starts must not be empty");
  }
  if (c.max_iters <= 0) throw ConfigError("solver.max_iters must be positive");
  if (!(c.tol > 0.0)) throw ConfigError("solver.tol must be positive");
  if (c.random_starts < 0) throw ConfigError("solver.random_starts must be nonnegative");
  if (c.dense_limit < 0) throw ConfigError("solver.dense_limit must be nonnegative");
  return c;
}

OutputConfig parse_output(const json& o) {
  reject_unknown(o, "output", {"dir", "formats", "trace"});
  OutputConfig c;
  read_opt(o, "dir", "output", c.dir);
  read_opt(o, "formats", "output", c.formats);
  read_opt(o, "trace", "output", c.trace);
  for (const auto& f : c.formats)
    if (f != "csv" && f != "json")
      throw ConfigError("output.formats entries must be \"csv\" or \"json\"");
  return c;
}

}  // namespace

Grid DomainConfig::grid() const { return Grid(extent, points, boundary, origin); }

Potential PotentialConfig::potential() const {
  if (kind == "harmonic") return HarmonicWell{omega, center};
  if (kind == "multiwell") return MultiWell{centers, depth, width};
  if (kind == "tabulated") return Tabulated{values};
  return FreeParticle{};
}

bool OutputConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

SolverConfig ExperimentConfig::solver_config(double mu) const {
  SolverConfig c = default_solver_config(mu, seed, solver.random_starts);
  c.penalty = solver.penalty;
  c.max_iters = solver.max_iters;
  c.tol = solver.tol;
  c.keep_trace = output.trace;
  if (solver.starts) {
    c.starts.clear();
    for (const auto& s : *solver.starts) c.starts.push_back(parse_start(s));
  }
  return c;
}

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  reject_unknown(doc, "config",
                 {"domain", "potential", "problem", "solver", "output", "seed"});
  ExperimentConfig c;
  c.domain = parse_domain(require(doc, "domain", ""));
  c.potential = parse_potential(require(doc, "potential", ""), base_dir);
  c.problem = parse_problem(require(doc, "problem", ""));
  if (doc.contains("solver")) c.solver = parse_solver(doc.at("solver"));
  if (doc.contains("output")) c.output = parse_output(doc.at("output"));
  read_opt(doc, "seed", "config", c.seed);

  if (c.potential.kind == "tabulated" &&
      static_cast<Index>(c.potential.values.size()) != c.domain.grid().size())
    throw ConfigError("tabulated potential has " + std::to_string(c.potential.values.size()) +
                      " values but the domain has " +
                      std::to_string(c.domain.grid().size()) + " nodes");
  if (c.problem.modes > c.domain.grid().size())
    throw ConfigError("problem.N exceeds the number of grid nodes");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(doc, path.parent_path());
}

json to_json(const ExperimentConfig& c) {
  json doc;
  doc["domain"] = {{"dim", c.domain.extent.size()},
                   {"extent", c.domain.extent},
                   {"points", c.domain.points},
                   {"boundary", to_string(c.domain.boundary)}};
  if (!c.domain.origin.empty()) doc["domain"]["origin"] = c.domain.origin;

  json pot = {{"kind", c.potential.kind}};
  if (c.potential.kind == "harmonic") {
    pot["omega"] = c.potential.omega;
    if (!c.potential.center.empty()) pot["center"] = c.potential.center;
  } else if (c.potential.kind == "multiwell") {
    pot["centers"] = c.potential.centers;
    pot["depth"] = c.potential.depth;
    pot["width"] = c.potential.width;
  } else if (c.potential.kind == "tabulated") {
    if (!c.potential.path.empty())
      pot["path"] = c.potential.path;
    else
      pot["values"] = c.potential.values;
  }
  doc["potential"] = pot;

  json prob = {{"N", c.problem.modes}, {"regularizer", c.problem.regularizer}};
  if (c.problem.mu) prob["mu"] = *c.problem.mu;
  if (!c.problem.mu_schedule.empty()) prob["mu_schedule"] = c.problem.mu_schedule;
  doc["problem"] = prob;

  json solver = {{"max_iters", c.solver.max_iters},
                 {"tol", c.solver.tol},
                 {"random_starts", c.solver.random_starts},
                 {"dense_limit", c.solver.dense_limit}};
  if (c.solver.penalty) solver["penalty"] = *c.solver.penalty;
  if (c.solver.starts) solver["starts"] = *c.solver.starts;
  doc["solver"] = solver;

  doc["output"] = {{"dir", c.output.dir},
                   {"formats", c.output.formats},
                   {"trace", c.output.trace}};
  doc["seed"] = c.seed;
  return doc;
}

}  // namespace cmlab
