#include <gtest/gtest.h>

#include <sstream>

#include "dnes/dynamics.hpp"

using namespace dnes;

namespace {

WeightMatrix half_pair() {
  Matrix W(2, 2);
  W << 0.5, 0.5, 0.5, 0.5;
  return {W};
}

QuadraticGame small_game() {
  Eigen::MatrixXd M(2, 2);
  M << 2, 1, -1, 2;
  return QuadraticGame(M, Vector::Zero(2));
}

WeightMatrix ring3() {
  Matrix W(3, 3);
  W << 0, 0, 1, 1, 0, 0, 0, 1, 0;
  return {W};
}

}  // namespace

TEST(Dynamics, InitState) {
  const auto w = ring3();
  Matrix H0(3, 1);
  H0 << 1, 2, 3;
  const auto s = init_state(w, Matrix::Zero(3, 1), H0);
  Matrix expected(3, 1);
  expected << 3, 1, 2;
  EXPECT_EQ(s.Hw, expected);
  EXPECT_EQ(init_state(w, Matrix::Zero(3, 1), Matrix::Zero(3, 1)).Hw, Matrix::Zero(3, 1));
  const Matrix same = Matrix::Constant(3, 2, 4.0);
  EXPECT_TRUE(init_state(w, same, same).Hw.isApprox(same));
}

TEST(Dynamics, AugmentedMappingExample) {
  Matrix X0(2, 2);
  X0 << 1, 0, 0, 1;
  const auto g = small_game();
  Matrix expected(2, 2);
  expected << 0.7, -0.5, -0.5, 0.7;
  EXPECT_TRUE(augmented_mapping(X0, half_pair(), 0.1, g).isApprox(expected));
  const auto w = half_pair();
  EXPECT_TRUE(augmented_mapping(X0, w, 0.0, g).isApprox(X0 - w.W * X0));
}

TEST(Dynamics, FirstStepExample) {
  Matrix X0(2, 2);
  X0 << 1, 0, 0, 1;
  const auto w = half_pair();
  const auto g = small_game();
  IdentityCompressor comp;
  const TriggerPolicy trig = DeterministicTrigger{ThresholdSchedule::zero()};
  NetworkState s = init_state(w, X0, Matrix::Zero(2, 2));
  const StepContext ctx{w, g, comp, trig, {0.1, 0.1, 1.0, 1}, 1, 32};
  const auto ev = step(s, ctx, 0);
  Matrix expected(2, 2);
  expected << 0.93, 0.05, 0.05, 0.93;
  EXPECT_TRUE(s.X.isApprox(expected, 1e-14));
  EXPECT_EQ(ev.n_triggered, 2);
  EXPECT_EQ(ev.bits, 2 * 64);
}

TEST(Dynamics, HugeThresholdHoldsValues) {
  Matrix X0(2, 2);
  X0 << 1, 0, 0, 1;
  const auto w = half_pair();
  const auto g = small_game();
  IdentityCompressor comp;
  const TriggerPolicy trig = DeterministicTrigger{ThresholdSchedule::exponential(1e9, 0.5)};
  NetworkState s = init_state(w, X0, Matrix::Zero(2, 2));
  const StepContext ctx{w, g, comp, trig, {0.1, 0.1, 0.5, 3}, 1, 32};
  step(s, ctx, 0);
  const Matrix held = s.Qtilde;
  const auto ev = step(s, ctx, 1);
  EXPECT_EQ(s.Qtilde, held);
  EXPECT_EQ(ev.bits, 0);
  EXPECT_EQ(ev.n_triggered, 0);
}

TEST(Dynamics, EquilibriumIsStationary) {
  ConnectivityGame g(4);
  DiGraph dg(4);
  for (int i = 0; i < 4; ++i) dg.add_edge(i, (i + 1) % 4);
  const auto w = build_row_stochastic_weights(dg);
  const Matrix Xs = consensual(*g.known_ne(), 4);
  NetworkState s{Xs, Xs, w.W * Xs, Matrix::Zero(4, 8)};
  IdentityCompressor comp;
  const TriggerPolicy trig = AlwaysTrigger{};
  const StepContext ctx{w, g, comp, trig, {0.01, 0.5, 1.0, 1}, 1, 32};
  step(s, ctx, 0);
  EXPECT_LT((s.X - Xs).lpNorm<Eigen::Infinity>(), 1e-14);
}

TEST(Dynamics, HwTracksWH) {
  ConnectivityGame g(6);
  const auto w = build_row_stochastic_weights(random_strongly_connected_digraph(6, 0.4, 2));
  StochasticQuantizer comp(2);
  const TriggerPolicy trig = StochasticTrigger{{1.5, 0.5}};
  RunConfig cfg;
  cfg.params = {0.01, 0.5, 0.05, 300};
  cfg.X0 = sample_initial_estimates(6, g.dim(), 3);
  cfg.H0 = Matrix::Zero(6, g.dim());
  cfg.Xstar = consensual(*g.known_ne(), 6);
  cfg.seed = 3;
  double worst = 0.0;
  cfg.observer = [&](long, const NetworkState&, const IterationEvents&, const NetworkState& after) {
    worst = std::max(worst, (after.Hw - w.W * after.H).norm() / (1.0 + after.H.norm()));
  };
  run(w, g, comp, trig, cfg);
  EXPECT_LE(worst, 1e-10);
}

TEST(Dynamics, RunIsDeterministic) {
  ConnectivityGame g(5);
  const auto w = build_row_stochastic_weights(random_strongly_connected_digraph(5, 0.5, 9));
  StochasticQuantizer comp(2);
  const TriggerPolicy trig = StochasticTrigger{{1.5, 0.5}};
  RunConfig cfg;
  cfg.params = {0.01, 0.5, 0.05, 500};
  cfg.X0 = sample_initial_estimates(5, g.dim(), 4);
  cfg.H0 = Matrix::Zero(5, g.dim());
  cfg.Xstar = consensual(*g.known_ne(), 5);
  cfg.seed = 4;
  std::ostringstream a, b;
  write_trace_csv(a, run(w, g, comp, trig, cfg));
  write_trace_csv(b, run(w, g, comp, trig, cfg));
  EXPECT_EQ(a.str(), b.str());
}

TEST(Dynamics, EmptyBudgetGivesEmptyTrace) {
  ConnectivityGame g(3);
  const auto w = ring3();
  IdentityCompressor comp;
  const TriggerPolicy trig = AlwaysTrigger{};
  RunConfig cfg;
  cfg.params = {0.01, 0.5, 1.0, 0};
  cfg.X0 = sample_initial_estimates(3, g.dim(), 1);
  cfg.H0 = Matrix::Zero(3, g.dim());
  cfg.Xstar = consensual(*g.known_ne(), 3);
  const auto t = run(w, g, comp, trig, cfg);
  EXPECT_TRUE(t.records.empty());
  EXPECT_EQ(t.summary.total_bits, 0);
}

TEST(Dynamics, DivergenceIsReported) {
  ConnectivityGame g(3);
  const auto w = ring3();
  IdentityCompressor comp;
  const TriggerPolicy trig = AlwaysTrigger{};
  RunConfig cfg;
  cfg.params = {50.0, 1.0, 1.0, 10000};
  cfg.X0 = sample_initial_estimates(3, g.dim(), 1);
  cfg.H0 = Matrix::Zero(3, g.dim());
  cfg.Xstar = consensual(*g.known_ne(), 3);
  try {
    run(w, g, comp, trig, cfg);
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_GT(e.iteration(), 0);
  }
}

TEST(Dynamics, AlphaValidatedAgainstR) {
  ConnectivityGame g(3);
  const auto w = ring3();
  StochasticQuantizer comp(2);
  const TriggerPolicy trig = AlwaysTrigger{};
  RunConfig cfg;
  cfg.params = {0.01, 0.5, 1.0, 10};
  cfg.X0 = sample_initial_estimates(3, g.dim(), 1);
  cfg.H0 = Matrix::Zero(3, g.dim());
  cfg.Xstar = consensual(*g.known_ne(), 3);
  EXPECT_THROW(run(w, g, comp, trig, cfg), std::invalid_argument);
}
