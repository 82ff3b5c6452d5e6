#include "cmlab/report_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace cmlab {
namespace {

nlohmann::json vector_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

nlohmann::json starts_json(const std::vector<StartOutcome>& starts) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : starts) {
    nlohmann::json o = {{"start", s.label},
                        {"objective", s.objective},
                        {"iterations", s.iterations},
                        {"converged", s.converged},
                        {"kept_initial", s.kept_initial}};
    if (!s.error.empty()) {
      o["objective"] = nullptr;
      o["error"] = s.error;
    }
    out.push_back(o);
  }
  return out;
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string eigs_csv(const EigenSystem& eigs) {
  std::ostringstream out;
  out << "index,lambda,residual\n";
  for (Index i = 0; i < eigs.count(); ++i)
    out << i + 1 << ',' << format_number(eigs.eigenvalues[i]) << ','
        << format_number(eigs.residual_norms[i]) << '\n';
  return out.str();
}

std::string modes_csv(const ModeSet& modes) {
  const Grid& g = modes.grid();
  auto join = [](const auto& xs) {
    std::string s;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (k) s += 'x';
      if constexpr (std::is_same_v<std::decay_t<decltype(xs[k])>, double>)
        s += format_number(xs[k]);
      else
        s += std::to_string(xs[k]);
    }
    return s;
  };
  std::ostringstream out;
  out << "# dim=" << g.dim() << '\n'
      << "# boundary=" << to_string(g.boundary()) << '\n'
      << "# extent=" << join(g.extent()) << '\n'
      << "# origin=" << join(g.origin()) << '\n'
      << "# points=" << join(g.points()) << '\n'
      << "# spacing=" << join(g.spacing()) << '\n'
      << "# weight=" << format_number(g.weight()) << '\n'
      << "# node order: axis 0 fastest\n";
  for (Index i = 0; i < modes.count(); ++i) out << (i ? "," : "") << "f_" << i + 1;
  out << '\n';
  for (Index r = 0; r < g.size(); ++r) {
    for (Index i = 0; i < modes.count(); ++i)
      out << (i ? "," : "") << format_number(modes.columns()(r, i));
    out << '\n';
  }
  return out.str();
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream out;
  out << "iter,objective,ortho_defect\n";
  for (const auto& t : trace)
    out << t.iter << ',' << format_number(t.objective) << ','
        << format_number(t.ortho_defect) << '\n';
  return out.str();
}

std::string sweep_csv(const SweepReport& report) {
  std::ostringstream out;
  out << "mu,E,E0,energy_gap";
  for (Index i = 0; i < report.n; ++i) out << ",nu_" << i + 1;
  out << ",max_eig_dev,procrustes_residual,ortho_defect,iterations,converged\n";
  for (const auto& r : report.records) {
    out << format_number(r.mu) << ',' << format_number(r.energy) << ','
        << format_number(r.ground_energy) << ',' << format_number(r.energy_gap);
    for (Index i = 0; i < r.nu.size(); ++i) out << ',' << format_number(r.nu[i]);
    out << ',' << format_number(r.max_eig_dev) << ','
        << format_number(r.procrustes_residual) << ',' << format_number(r.ortho_defect)
        << ',' << r.iterations << ',' << (r.converged ? "true" : "false") << '\n';
  }
  return out.str();
}

nlohmann::json sweep_json(const SweepReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.records) {
    rows.push_back({{"mu", r.mu},
                    {"E", r.energy},
                    {"E0", r.ground_energy},
                    {"energy_gap", r.energy_gap},
                    {"energy_cap", r.energy_cap},
                    {"nu", vector_json(r.nu)},
                    {"max_eig_dev", r.max_eig_dev},
                    {"procrustes_residual", r.procrustes_residual},
                    {"ortho_defect", r.ortho_defect},
                    {"objective", r.objective},
                    {"iterations", r.iterations},
                    {"converged", r.converged},
                    {"best_start", r.best_start},
                    {"starts", starts_json(r.starts)}});
  }
  return {{"N", report.n},
          {"regularizer", report.regularizer},
          {"eigenvalues", vector_json(report.eigenvalues)},
          {"spectral_gap", report.spectral_gap},
          {"gap_threshold", report.gap_threshold},
          {"degenerate", report.degenerate},
          {"verdicts",
           {{"MONOTONE_ENERGY", to_string(report.monotone_energy)},
            {"EIG_CONVERGENCE", to_string(report.eig_convergence)},
            {"L2_CONVERGENCE", to_string(report.l2_convergence)}}},
          {"records", rows}};
}

nlohmann::json solve_json(const SolverResult& result, double mu, double energy,
                          double ground_energy, const Eigen::VectorXd& widths) {
  return {{"mu", mu},
          {"objective", result.objective},
          {"E", energy},
          {"E0", ground_energy},
          {"ortho_defect", result.modes.ortho_defect()},
          {"localization_widths", vector_json(widths)},
          {"iterations", result.iterations},
          {"converged", result.converged},
          {"penalty", result.penalty},
          {"best_start", result.starts[result.best_start].label},
          {"starts", starts_json(result.starts)}};
}

}  // namespace cmlab
