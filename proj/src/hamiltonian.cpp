#include "cmlab/hamiltonian.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cmlab {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double squared_distance(const Grid& grid, Index node,
                        const std::vector<double>& center) {
  double r2 = 0.0;
  for (int a = 0; a < grid.dim(); ++a) {
    const double d = grid.coordinate(node, a) - center[a];
    r2 += d * d;
  }
  return r2;
}

std::vector<double> box_midpoint(const Grid& grid) {
  std::vector<double> mid(grid.dim());
  for (int a = 0; a < grid.dim(); ++a)
    mid[a] = grid.origin()[a] + 0.5 * grid.extent()[a];
  return mid;
}

// Neighbour of `node` one step along `axis` in direction `step` (+1 or -1),
// or -1 when the step leaves a Dirichlet box.
Index neighbour(const Grid& grid, Index node, int axis, int step) {
  const Index n = grid.points()[axis];
  const Index stride = axis == 0 ? 1 : grid.points()[0];
  const Index i = grid.axis_index(node, axis);
  Index j = i + step;
  if (j < 0 || j >= n) {
    if (grid.boundary() == Boundary::Dirichlet) return -1;
    j = (j + n) % n;
  }
  return node + (j - i) * stride;
}

}  // namespace

Tabulated load_tabulated_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open potential file " + path.string());
  Tabulated t;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    double v = 0.0;
    if (!(ss >> v))
      throw std::runtime_error("malformed potential value: '" + line + "'");
    t.values.push_back(v);
  }
  return t;
}

Eigen::VectorXd potential_values(const Grid& grid, const Potential& potential) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(grid.size());
  std::visit(
      overloaded{
          [](const FreeParticle&) {},
          [&](const HarmonicWell& p) {
            const auto center = p.center.empty() ? box_midpoint(grid) : p.center;
            if (static_cast<int>(center.size()) != grid.dim())
              throw std::invalid_argument("harmonic centre has wrong dimension");
            for (Index n = 0; n < grid.size(); ++n)
              v[n] = 0.5 * p.omega * p.omega * squared_distance(grid, n, center);
          },
          [&](const MultiWell& p) {
            if (!(p.width > 0.0))
              throw std::invalid_argument("multiwell width must be positive");
            for (const auto& c : p.centers) {
              if (static_cast<int>(c.size()) != grid.dim())
                throw std::invalid_argument("well centre has wrong dimension");
              for (Index n = 0; n < grid.size(); ++n)
                v[n] -= p.depth * std::exp(-squared_distance(grid, n, c) /
                                           (2.0 * p.width * p.width));
            }
          },
          [&](const Tabulated& p) {
            if (static_cast<Index>(p.values.size()) != grid.size())
              throw std::invalid_argument(
                  "tabulated potential has " + std::to_string(p.values.size()) +
                  " values, grid has " + std::to_string(grid.size()) + " nodes");
            for (Index n = 0; n < grid.size(); ++n) {
              if (!std::isfinite(p.values[n]))
                throw std::invalid_argument("tabulated potential is not finite");
              v[n] = p.values[n];
            }
          },
      },
      potential);
  return v;
}

HamiltonianOperator::HamiltonianOperator(Grid grid, Potential potential)
    : grid_(std::move(grid)), potential_(std::move(potential)) {
  diagonal_ = potential_values(grid_, potential_);
  for (int a = 0; a < grid_.dim(); ++a) {
    const double h = grid_.spacing()[a];
    coupling_.push_back(-0.5 / (h * h));
    diagonal_.array() += 1.0 / (h * h);
  }
}

void HamiltonianOperator::apply_to(const Eigen::Ref<const Eigen::MatrixXd>& in,
                                   Eigen::Ref<Eigen::MatrixXd> out) const {
  if (in.rows() != grid_.size() || out.rows() != in.rows() ||
      out.cols() != in.cols())
    throw std::invalid_argument("operand shape does not match the grid");
  out = diagonal_.asDiagonal() * in;
  for (int a = 0; a < grid_.dim(); ++a) {
    const double c = coupling_[a];
    for (Index node = 0; node < grid_.size(); ++node) {
      for (int step : {-1, 1}) {
        const Index nb = neighbour(grid_, node, a, step);
        if (nb >= 0) out.row(node) += c * in.row(nb);
      }
    }
  }
}

Eigen::MatrixXd HamiltonianOperator::apply_to(
    const Eigen::Ref<const Eigen::MatrixXd>& in) const {
  Eigen::MatrixXd out(in.rows(), in.cols());
  apply_to(in, out);
  return out;
}

Eigen::SparseMatrix<double> HamiltonianOperator::sparse() const {
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(grid_.size() * (1 + 2 * grid_.dim()));
  for (Index node = 0; node < grid_.size(); ++node) {
    entries.emplace_back(node, node, diagonal_[node]);
    for (int a = 0; a < grid_.dim(); ++a)
      for (int step : {-1, 1}) {
        const Index nb = neighbour(grid_, node, a, step);
        if (nb >= 0) entries.emplace_back(node, nb, coupling_[a]);
      }
  }
  Eigen::SparseMatrix<double> m(grid_.size(), grid_.size());
  m.setFromTriplets(entries.begin(), entries.end());  // sums duplicates
  return m;
}

HamiltonianOperator build_hamiltonian(const Grid& grid,
                                      const Potential& potential) {
  return HamiltonianOperator(grid, potential);
}

DiscreteFunction apply(const HamiltonianOperator& h, const DiscreteFunction& u) {
  require_same_grid(h.grid(), u.grid);
  return DiscreteFunction(u.grid, h.apply_to(u.values));
}

Eigen::MatrixXd materialize_dense(const HamiltonianOperator& h, Index limit) {
  if (h.grid().size() > limit)
    throw std::length_error(
        "grid has " + std::to_string(h.grid().size()) +
        " nodes, above the dense limit of " + std::to_string(limit) +
        "; use the iterative eigensolver path");
  Eigen::MatrixXd dense = Eigen::MatrixXd(h.sparse());
  // bitwise symmetric
  dense = 0.5 * (dense + dense.transpose()).eval();
  return dense;
}

}  // namespace cmlab
