#include "dnes/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "dnes/rng.hpp"

namespace dnes {

DiGraph::DiGraph(int n) : n_(n), in_(static_cast<std::size_t>(std::max(n, 0))) {
  if (n < 1) throw std::invalid_argument("DiGraph: agent count must be positive");
}

void DiGraph::add_edge(int src, int dst) {
  if (src < 0 || src >= n_ || dst < 0 || dst >= n_) {
    throw std::out_of_range("DiGraph::add_edge: agent index out of range");
  }
  if (src == dst) return;
  auto& lst = in_[static_cast<std::size_t>(dst)];
  const auto it = std::lower_bound(lst.begin(), lst.end(), src);
  if (it == lst.end() || *it != src) lst.insert(it, src);
}

bool DiGraph::has_edge(int src, int dst) const {
  const auto& lst = in_neighbors(dst);
  return std::binary_search(lst.begin(), lst.end(), src);
}

std::size_t DiGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& lst : in_) total += lst.size();
  return total;
}

DiGraph DiGraph::relabeled(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != n_) {
    throw std::invalid_argument("DiGraph::relabeled: permutation size mismatch");
  }
  DiGraph out(n_);
  for (int i = 0; i < n_; ++i) {
    for (int j : in_neighbors(i)) out.add_edge(perm[static_cast<std::size_t>(j)], perm[static_cast<std::size_t>(i)]);
  }
  return out;
}

double WeightMatrix::row_sum_error() const {
  return (W.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

namespace {

// Marks every agent reachable from `start`, following links forward
// (src -> dst) when `forward`, backward otherwise.
std::vector<char> reach(const DiGraph& g, int start, bool forward) {
  const int n = g.size();
  std::vector<std::vector<int>> out;
  if (forward) {
    out.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      for (int j : g.in_neighbors(i)) out[static_cast<std::size_t>(j)].push_back(i);
    }
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{start};
  seen[static_cast<std::size_t>(start)] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    const auto& next = forward ? out[static_cast<std::size_t>(u)] : g.in_neighbors(u);
    for (int v : next) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace

bool check_strong_connectivity(const DiGraph& g) {
  // Strongly connected iff agent 0 reaches everyone and everyone reaches agent 0.
  for (bool forward : {true, false}) {
    const auto seen = reach(g, 0, forward);
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) return false;
  }
  return true;
}

WeightMatrix build_row_stochastic_weights(const DiGraph& g) {
  if (!check_strong_connectivity(g)) {
    throw std::invalid_argument("build_row_stochastic_weights: graph is not strongly connected");
  }
  const int n = g.size();
  std::size_t max_in = 0;
  for (int i = 0; i < n; ++i) max_in = std::max(max_in, g.in_neighbors(i).size());

  WeightMatrix w{Matrix::Zero(n, n)};
  if (max_in == 0) {
    // Single agent.
    w.W(0, 0) = 1.0;
    return w;
  }
  const double weight = 1.0 / static_cast<double>(max_in);
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j : g.in_neighbors(i)) {
      w.W(i, j) = weight;
      row += weight;
    }
    w.W(i, i) = 1.0 - row;
  }
  return w;
}

SpectralQuantities spectral_quantities(const WeightMatrix& w) {
  const int n = w.size();
  const Matrix L = Matrix::Identity(n, n) - w.W;
  SpectralQuantities sq;
  sq.fro_I_minus_W = L.norm();

  const Eigen::MatrixXd sym = 0.5 * (L + L.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("spectral_quantities: eigenvalue solver failed");
  }
  double smallest = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const double ev = solver.eigenvalues()(k);
    if (ev > kEigenvalueTolerance) smallest = std::min(smallest, ev);
  }
  if (!std::isfinite(smallest)) {
    throw std::runtime_error("spectral_quantities: symmetric part of I - W has no eigenvalue above tolerance");
  }
  sq.lambda_min_tilde = smallest;
  return sq;
}

DiGraph random_strongly_connected_digraph(int n, double p, std::uint64_t seed) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("random_strongly_connected_digraph: p must lie in (0, 1]");
  }
  for (std::uint64_t attempt = 0;; ++attempt) {
    RngStream rng(seed, StreamPurpose::graph, 0, attempt);
    DiGraph g(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j && rng.uniform() < p) g.add_edge(j, i);
      }
    }
    if (check_strong_connectivity(g)) return g;
    if (attempt > 100000) {
      throw std::runtime_error("random_strongly_connected_digraph: no strongly connected draw; raise p");
    }
  }
}

DiGraph read_edge_list(std::istream& in) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      const auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos || line[pos] == '#') continue;
      return true;
    }
    return false;
  };
  if (!next_line()) throw std::runtime_error("edge list: missing agent count");
  int n = 0;
  {
    std::istringstream ss(line);
    if (!(ss >> n) || n < 1) throw std::runtime_error("edge list: invalid agent count '" + line + "'");
  }
  DiGraph g(n);
  while (next_line()) {
    std::istringstream ss(line);
    int src = 0, dst = 0;
    if (!(ss >> src >> dst)) throw std::runtime_error("edge list: malformed edge '" + line + "'");
    if (src < 1 || src > n || dst < 1 || dst > n) {
      throw std::runtime_error("edge list: agent index out of range in '" + line + "'");
    }
    g.add_edge(src - 1, dst - 1);
  }
  return g;
}

DiGraph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list '" + path + "'");
  return read_edge_list(in);
}

void write_weights_csv(std::ostream& out, const WeightMatrix& w) {
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < w.W.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.W.cols(); ++j) {
      if (j) out << ',';
      out << w.W(i, j);
    }
    out << '\n';
  }
  out.flags(flags);
  out.precision(prec);
}

}  // namespace dnes
