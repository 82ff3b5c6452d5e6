#include "cmlab/cm_solver.hpp"
#include "cmlab/consistency.hpp"
#include "cmlab/eigensolver.hpp"
#include "cmlab/hamiltonian.hpp"
#include "cmlab/regularizer.hpp"
#include "cmlab/report_io.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace cmlab;

namespace {

Potential make_potential(const std::string& kind, const py::dict& params) {
  auto get = [&](const char* key, auto fallback) {
    return params.contains(key) ? params[key].cast<decltype(fallback)>() : fallback;
  };
  if (kind == "free") return FreeParticle{};
  if (kind == "harmonic")
    return HarmonicWell{get("omega", 1.0), get("center", std::vector<double>{})};
  if (kind == "multiwell")
    return MultiWell{get("centers", std::vector<std::vector<double>>{}), get("depth", 1.0),
                     get("width", 1.0)};
  if (kind == "tabulated") return Tabulated{get("values", std::vector<double>{})};
  throw std::invalid_argument("unknown potential kind '" + kind + "'");
}

ModeSet as_modes(const Grid& grid, const Eigen::MatrixXd& columns) {
  return ModeSet(grid, columns);
}

}  // namespace

PYBIND11_MODULE(_cmlab, m) {
  m.doc() = "Compressed modes for finite-difference Schroedinger operators";

  py::enum_<Boundary>(m, "Boundary")
      .value("DIRICHLET", Boundary::Dirichlet)
      .value("PERIODIC", Boundary::Periodic);

  py::class_<Grid>(m, "Grid")
      .def(py::init<std::vector<double>, std::vector<int>, Boundary, std::vector<double>>(),
           py::arg("extent"), py::arg("points"), py::arg("boundary"),
           py::arg("origin") = std::vector<double>{})
      .def_static("interval", &Grid::interval, py::arg("length"), py::arg("points"),
                  py::arg("boundary"), py::arg("origin") = 0.0)
      .def_property_readonly("dim", &Grid::dim)
      .def_property_readonly("size", &Grid::size)
      .def_property_readonly("spacing", &Grid::spacing)
      .def_property_readonly("weight", &Grid::weight)
      .def_property_readonly("measure", &Grid::measure)
      .def("coordinates", [](const Grid& g, int axis) {
        Eigen::VectorXd x(g.size());
        for (Index i = 0; i < g.size(); ++i) x[i] = g.coordinate(i, axis);
        return x;
      }, py::arg("axis") = 0);

  py::class_<HamiltonianOperator>(m, "Hamiltonian")
      .def(py::init([](const Grid& g, const std::string& kind, const py::dict& params) {
             return build_hamiltonian(g, make_potential(kind, params));
           }),
           py::arg("grid"), py::arg("potential") = "free", py::arg("params") = py::dict())
      .def_property_readonly("grid", &HamiltonianOperator::grid)
      .def("apply", [](const HamiltonianOperator& h, const Eigen::MatrixXd& u) {
        return h.apply_to(u);
      })
      .def("dense", [](const HamiltonianOperator& h) { return materialize_dense(h); });

  py::class_<EigenSystem>(m, "EigenSystem")
      .def_readonly("eigenvalues", &EigenSystem::eigenvalues)
      .def_property_readonly("modes",
                             [](const EigenSystem& e) { return e.modes.columns(); })
      .def_readonly("residual_norms", &EigenSystem::residual_norms);

  m.def("eigenpairs", [](const HamiltonianOperator& h, Index count, Index dense_limit) {
    EigenOptions o;
    o.dense_limit = dense_limit;
    return reference_eigenpairs(h, count, o);
  }, py::arg("h"), py::arg("count"), py::arg("dense_limit") = kDefaultDenseLimit);

  py::class_<SolverResult>(m, "SolveResult")
      .def_property_readonly("modes", [](const SolverResult& r) { return r.modes.columns(); })
      .def_readonly("objective", &SolverResult::objective)
      .def_readonly("iterations", &SolverResult::iterations)
      .def_readonly("converged", &SolverResult::converged)
      .def_readonly("penalty", &SolverResult::penalty)
      .def_property_readonly("best_start", [](const SolverResult& r) {
        return r.starts[r.best_start].label;
      });

  m.def("solve",
        [](const HamiltonianOperator& h, Index n, double mu, const std::string& regularizer,
           std::uint64_t seed, int random_starts, int max_iters, double tol) {
          SolverConfig c = default_solver_config(mu, seed, random_starts);
          c.max_iters = max_iters;
          c.tol = tol;
          c.keep_trace = false;
          py::gil_scoped_release release;
          return solve_cm(h, *make_regularizer(regularizer), n, c);
        },
        py::arg("h"), py::arg("n"), py::arg("mu"), py::arg("regularizer") = "l1",
        py::arg("seed") = 0, py::arg("random_starts") = 2, py::arg("max_iters") = 10000,
        py::arg("tol") = 1e-7);

  py::class_<SweepReport>(m, "SweepReport")
      .def_readonly("degenerate", &SweepReport::degenerate)
      .def_readonly("spectral_gap", &SweepReport::spectral_gap)
      .def_readonly("eigenvalues", &SweepReport::eigenvalues)
      .def_property_readonly("verdicts", [](const SweepReport& r) {
        return std::map<std::string, std::string>{
            {"MONOTONE_ENERGY", to_string(r.monotone_energy)},
            {"EIG_CONVERGENCE", to_string(r.eig_convergence)},
            {"L2_CONVERGENCE", to_string(r.l2_convergence)}};
      })
      .def_property_readonly("energy_gap", [](const SweepReport& r) {
        std::vector<double> v;
        for (const auto& rec : r.records) v.push_back(rec.energy_gap);
        return v;
      })
      .def_property_readonly("procrustes_residual", [](const SweepReport& r) {
        std::vector<double> v;
        for (const auto& rec : r.records) v.push_back(rec.procrustes_residual);
        return v;
      })
      .def("csv", [](const SweepReport& r) { return sweep_csv(r); });

  m.def("mu_sweep",
        [](const HamiltonianOperator& h, Index n, std::vector<double> schedule,
           const std::string& regularizer, std::uint64_t seed, int random_starts,
           int max_iters) {
          SolverConfig c = default_solver_config(schedule.empty() ? 1.0 : schedule.front(), seed,
                                                 random_starts);
          c.max_iters = max_iters;
          c.keep_trace = false;
          py::gil_scoped_release release;
          return mu_sweep(h, *make_regularizer(regularizer), n, schedule, c);
        },
        py::arg("h"), py::arg("n"), py::arg("schedule"), py::arg("regularizer") = "l1",
        py::arg("seed") = 0, py::arg("random_starts") = 2, py::arg("max_iters") = 5000);

  m.def("localization", [](const Grid& g, const Eigen::MatrixXd& modes) {
    return localization(as_modes(g, modes));
  });
  m.def("procrustes_residual",
        [](const Grid& g, const Eigen::MatrixXd& f, const Eigen::MatrixXd& phi) {
          return procrustes_align(as_modes(g, f), as_modes(g, phi)).residual;
        });
  m.def("column_mass_lemma_check", &column_mass_lemma_check, py::arg("rows"),
        py::arg("cols"), py::arg("seed"));
}
