#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "dnes/compressors.hpp"
#include "dnes/games.hpp"
#include "dnes/graph.hpp"
#include "dnes/metrics.hpp"
#include "dnes/triggers.hpp"
#include "dnes/types.hpp"

namespace dnes {

struct AlgorithmParams {
  double eta = 0.01;    ///< gradient stepsize
  double gamma = 0.5;   ///< consensus stepsize
  double alpha = 0.05;  ///< reference-point mixing weight
  long max_iters = 0;

  /// Requires eta > 0, gamma > 0 and alpha in (0, 1/r].
  void validate(const CompressorConstants& c) const;
};

/// Global view of the network. Row i of every matrix belongs to agent i.
struct NetworkState {
  Matrix X;       ///< local estimates x_(i)
  Matrix H;       ///< reference points h_i
  Matrix Hw;      ///< weighted references h_{i,w}
  Matrix Qtilde;  ///< latest sent values q~_i
};

struct IterationEvents {
  std::vector<TriggerDecision> decisions;
  std::vector<char> triggers;
  Vector event_err_norm;  ///< ||e_{i,k}|| per agent
  double event_err_sq = 0.0;
  Matrix D;               ///< compression error X_k - X^_k
  std::int64_t bits = 0;
  int n_triggered = 0;
};

/// Raised when the state leaves the finite range; carries the iteration.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(long iteration, const std::string& what) : std::runtime_error(what), iteration_(iteration) {}
  long iteration() const { return iteration_; }

 private:
  long iteration_;
};

/// Any state entry above this magnitude counts as divergence.
constexpr double kDivergenceBound = 1e12;

/// H_w = W H_0, Q~ = 0. Throws std::invalid_argument on dimension mismatch.
NetworkState init_state(const WeightMatrix& w, const Matrix& x0, const Matrix& h0);

/// (I - W) X + eta F~(X), with agent i's own gradient placed in row i, block i.
Matrix augmented_mapping(const Matrix& X, const WeightMatrix& w, double eta, const AffineGame& game);

/// Everything a step needs besides the state.
struct StepContext {
  const WeightMatrix& w;
  const AffineGame& game;
  const Compressor& compressor;
  const TriggerPolicy& trigger;
  AlgorithmParams params;
  std::uint64_t seed = 0;
  int scalar_bits = 32;
};

/// One iteration k: compress innovations, resolve triggers, update the held
/// values, then the reference points and the estimates. Throws DivergenceError
/// if the new state is non-finite or exceeds kDivergenceBound.
IterationEvents step(NetworkState& state, const StepContext& ctx, long k);

/// Called after every step with the pre-step state, the events, and the new state.
using StepObserver = std::function<void(long k, const NetworkState& before, const IterationEvents& events,
                                        const NetworkState& after)>;

struct RunConfig {
  AlgorithmParams params;
  Matrix X0;
  Matrix H0;
  Matrix Xstar;              ///< consensual NE matrix 1 x*'
  double target = 0.0;       ///< stop once R_k <= target (0 disables)
  std::uint64_t seed = 0;
  int scalar_bits = 32;
  StepObserver observer;
};

/// Runs up to params.max_iters steps. Record k describes X_k and the
/// communication of step k. When R_k <= target the run stops and record k
/// carries no communication. DivergenceError propagates with its iteration.
RunTrace run(const WeightMatrix& w, const AffineGame& game, const Compressor& compressor,
             const TriggerPolicy& trigger, const RunConfig& cfg);

/// Stacks x* into every row.
Matrix consensual(const Vector& x, int agents);

/// Uniform [0, 1) initial estimates, one stream per agent.
Matrix sample_initial_estimates(int agents, int dim, std::uint64_t seed);

}  // namespace dnes
