#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dnes/types.hpp"

namespace dnes {

/// Directed communication graph stored as in-neighbour lists. Agent indices
/// are zero-based; self-loops are never stored (the diagonal weight covers them).
class DiGraph {
 public:
  explicit DiGraph(int n);

  /// Adds the link src -> dst (src sends to dst). Duplicates are ignored.
  void add_edge(int src, int dst);

  int size() const { return n_; }
  const std::vector<int>& in_neighbors(int i) const { return in_[static_cast<std::size_t>(i)]; }
  bool has_edge(int src, int dst) const;
  std::size_t edge_count() const;

  /// Returns a copy with agents relabelled so that old agent i becomes perm[i].
  DiGraph relabeled(const std::vector<int>& perm) const;

 private:
  int n_;
  std::vector<std::vector<int>> in_;
};

/// Row-stochastic mixing matrix; row i mixes values received from N_i^-.
struct WeightMatrix {
  Matrix W;

  int size() const { return static_cast<int>(W.rows()); }
  /// Largest |row sum - 1|.
  double row_sum_error() const;
};

struct SpectralQuantities {
  double fro_I_minus_W = 0.0;
  /// Smallest eigenvalue above tolerance of the symmetric part of I - W.
  double lambda_min_tilde = 0.0;
};

constexpr double kEigenvalueTolerance = 1e-9;

bool check_strong_connectivity(const DiGraph& g);

/// W_ij = 1 / max_l |N_l^-| for j in N_i^-, W_ii = 1 - sum of the row.
/// Throws std::invalid_argument if g is not strongly connected.
WeightMatrix build_row_stochastic_weights(const DiGraph& g);

/// Throws std::runtime_error when every eigenvalue of the symmetric part of
/// I - W is below kEigenvalueTolerance.
SpectralQuantities spectral_quantities(const WeightMatrix& w);

/// Directed Erdos-Renyi graph: each ordered pair (j, i), j != i, is a link with
/// probability p. Draws are regenerated until the graph is strongly connected.
DiGraph random_strongly_connected_digraph(int n, double p, std::uint64_t seed);

/// Edge-list text format: first line `n`, then one `src dst` pair per line,
/// 1-based. Blank lines and lines starting with '#' are skipped.
DiGraph read_edge_list(std::istream& in);
DiGraph read_edge_list_file(const std::string& path);

/// Row-major CSV, full round-trip precision.
void write_weights_csv(std::ostream& out, const WeightMatrix& w);

}  // namespace dnes
