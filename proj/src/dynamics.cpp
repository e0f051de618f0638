#include "dnes/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <type_traits>

namespace dnes {

void AlgorithmParams::validate(const CompressorConstants& c) const {
  if (!(eta > 0.0)) throw std::invalid_argument("AlgorithmParams: eta must be positive");
  if (!(gamma > 0.0)) throw std::invalid_argument("AlgorithmParams: gamma must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0 / c.r)) {
    std::ostringstream msg;
    msg << "AlgorithmParams: alpha = " << alpha << " outside (0, 1/r] with r = " << c.r;
    throw std::invalid_argument(msg.str());
  }
  if (max_iters < 0) throw std::invalid_argument("AlgorithmParams: negative iteration budget");
}

NetworkState init_state(const WeightMatrix& w, const Matrix& x0, const Matrix& h0) {
  const auto n = w.W.rows();
  if (x0.rows() != n || h0.rows() != n || x0.cols() != h0.cols()) {
    throw std::invalid_argument("init_state: X0, H0 and W dimensions disagree");
  }
  NetworkState s;
  s.X = x0;
  s.H = h0;
  s.Hw = w.W * h0;
  s.Qtilde = Matrix::Zero(n, x0.cols());
  return s;
}

namespace {

// F~(X): row i holds grad_i J_i(x_(i)) in agent i's own block.
Matrix local_gradients(const Matrix& X, const AffineGame& game) {
  const int n = game.players();
  const int da = game.action_dim();
  Matrix G = Matrix::Zero(X.rows(), X.cols());
  for (int i = 0; i < n; ++i) {
    const Vector xi = X.row(i).transpose();
    G.row(i).segment(static_cast<Eigen::Index>(i) * da, da) = game.partial_gradient(i, xi).transpose();
  }
  return G;
}

void check_dimensions(const NetworkState& s, const AffineGame& game, const WeightMatrix& w) {
  if (s.X.rows() != game.players() || s.X.cols() != game.dim() || w.W.rows() != game.players()) {
    throw std::invalid_argument("step: state, game and weight matrix dimensions disagree");
  }
}

void check_finite(const NetworkState& s, long k) {
  auto bad = [](const Matrix& m) { return !m.allFinite() || m.cwiseAbs().maxCoeff() > kDivergenceBound; };
  if (bad(s.X) || bad(s.H) || bad(s.Hw)) {
    std::ostringstream msg;
    msg << "divergence detected at iteration " << k << " (state non-finite or above " << kDivergenceBound << ")";
    throw DivergenceError(k, msg.str());
  }
}

}  // namespace

Matrix augmented_mapping(const Matrix& X, const WeightMatrix& w, double eta, const AffineGame& game) {
  if (X.rows() != w.W.rows() || X.rows() != game.players() || X.cols() != game.dim()) {
    throw std::invalid_argument("augmented_mapping: dimension mismatch");
  }
  return X - w.W * X + eta * local_gradients(X, game);
}

IterationEvents step(NetworkState& s, const StepContext& ctx, long k) {
  check_dimensions(s, ctx.game, ctx.w);
  const auto n = s.X.rows();
  const auto& p = ctx.params;

  const Matrix grads = local_gradients(s.X, ctx.game);

  IterationEvents ev;
  ev.decisions.resize(static_cast<std::size_t>(n));
  ev.triggers.assign(static_cast<std::size_t>(n), 0);
  ev.event_err_norm = Vector::Zero(n);

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto agent = static_cast<std::uint64_t>(i);
    const Vector x = s.X.row(i).transpose();
    const Vector h = s.H.row(i).transpose();
    const Vector q_prev = s.Qtilde.row(i).transpose();

    RngStream comp_rng(ctx.seed, StreamPurpose::compressor, agent, static_cast<std::uint64_t>(k));
    const CompressedPayload q = ctx.compressor.compress(x - h, comp_rng, ctx.scalar_bits);

    TriggerDecision dec = std::visit(
        [&](const auto& policy) -> TriggerDecision {
          using T = std::decay_t<decltype(policy)>;
          if constexpr (std::is_same_v<T, AlwaysTrigger>) {
            return deterministic_trigger(q.value, q_prev, 0.0, k);
          } else if constexpr (std::is_same_v<T, DeterministicTrigger>) {
            return deterministic_trigger(q.value, q_prev, policy.schedule.value(k), k);
          } else {
            RngStream zeta_rng(ctx.seed, StreamPurpose::trigger_zeta, agent, static_cast<std::uint64_t>(k));
            const double zeta = policy.params.sample_zeta(zeta_rng);
            return stochastic_trigger(q.value, q_prev, x, h, policy.params, zeta, k);
          }
        },
        ctx.trigger);

    if (dec.fired) {
      s.Qtilde.row(i) = q.value.transpose();
      ev.bits += q.bit_count;
      ++ev.n_triggered;
      ev.triggers[static_cast<std::size_t>(i)] = 1;
    } else {
      // e_{i,k} = q_k - q~_{k-1}
      ev.event_err_norm(i) = dec.innovation_norm;
    }
    ev.decisions[static_cast<std::size_t>(i)] = dec;
  }
  ev.event_err_sq = ev.event_err_norm.squaredNorm();

  const Matrix Xhat = s.H + s.Qtilde;
  const Matrix Xhat_w = s.Hw + ctx.w.W * s.Qtilde;
  ev.D = s.X - Xhat;

  s.H = (1.0 - p.alpha) * s.H + p.alpha * Xhat;
  s.Hw = (1.0 - p.alpha) * s.Hw + p.alpha * Xhat_w;
  s.X -= p.gamma * (Xhat - Xhat_w) + (p.gamma * p.eta) * grads;

  check_finite(s, k);
  return ev;
}

Matrix consensual(const Vector& x, int agents) { return Vector::Ones(agents) * x.transpose(); }

Matrix sample_initial_estimates(int agents, int dim, std::uint64_t seed) {
  Matrix X(agents, dim);
  for (int i = 0; i < agents; ++i) {
    RngStream rng(seed, StreamPurpose::initial_state, static_cast<std::uint64_t>(i), 0);
    for (int j = 0; j < dim; ++j) X(i, j) = rng.uniform();
  }
  return X;
}

RunTrace run(const WeightMatrix& w, const AffineGame& game, const Compressor& compressor,
             const TriggerPolicy& trigger, const RunConfig& cfg) {
  const int n = game.players();
  const int dim = game.dim();
  cfg.params.validate(compressor.constants(dim));
  if (cfg.Xstar.rows() != n || cfg.Xstar.cols() != dim) throw std::invalid_argument("run: X* has wrong shape");

  NetworkState state = init_state(w, cfg.X0, cfg.H0);
  const StepContext ctx{w, game, compressor, trigger, cfg.params, cfg.seed, cfg.scalar_bits};
  const double denom = (cfg.X0 - cfg.Xstar).norm();
  if (denom == 0.0) throw std::invalid_argument("run: X0 equals X*, residual undefined");

  RunTrace trace;
  trace.agents = n;
  trace.records.reserve(static_cast<std::size_t>(std::min<long>(cfg.params.max_iters, 1L << 20)));
  std::int64_t bits = 0, rounds = 0;

  for (long k = 0; k < cfg.params.max_iters; ++k) {
    IterationRecord rec;
    rec.k = k;
    rec.v1 = (state.X - cfg.Xstar).squaredNorm();
    rec.v2 = (state.X - state.H).squaredNorm();
    rec.residual = std::sqrt(rec.v1) / denom;

    if (cfg.target > 0.0 && rec.residual <= cfg.target) {
      rec.bits_cum = bits;
      rec.rounds_cum = rounds;
      rec.triggers.assign(static_cast<std::size_t>(n), 0);
      trace.records.push_back(std::move(rec));
      trace.summary.reached_target = true;
      break;
    }

    IterationEvents ev;
    if (cfg.observer) {
      const NetworkState before = state;
      ev = step(state, ctx, k);
      cfg.observer(k, before, ev, state);
    } else {
      ev = step(state, ctx, k);
    }
    bits += ev.bits;
    rounds += ev.n_triggered;
    rec.event_err_sq = ev.event_err_sq;
    rec.bits_cum = bits;
    rec.rounds_cum = rounds;
    rec.n_triggered = ev.n_triggered;
    rec.triggers = std::move(ev.triggers);
    trace.records.push_back(std::move(rec));
    ++trace.summary.iterations;
  }

  auto& sum = trace.summary;
  sum.final_residual = (state.X - cfg.Xstar).norm() / denom;
  if (cfg.target > 0.0 && sum.final_residual <= cfg.target) sum.reached_target = true;
  sum.total_bits = bits;
  sum.total_rounds = rounds;
  sum.communication_rate =
      sum.iterations > 0 ? static_cast<double>(rounds) / (static_cast<double>(n) * static_cast<double>(sum.iterations))
                         : 0.0;
  return trace;
}

}  // namespace dnes
