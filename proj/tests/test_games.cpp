#include <gtest/gtest.h>

#include <sstream>

#include "dnes/games.hpp"
#include "dnes/rng.hpp"

using namespace dnes;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST(Connectivity, GradientExamples) {
  ConnectivityGame g(3);
  // Player 2 (index 1) at the origin.
  EXPECT_EQ(g.partial_gradient(1, Vector::Zero(6)), vec({2, 2}));
  Vector x = Vector::Zero(6);
  x.segment(0, 2) = vec({1, 0});
  x.segment(2, 2) = vec({1, 0});
  EXPECT_EQ(g.partial_gradient(0, x), vec({3, 1}));
}

TEST(Connectivity, NashEquilibrium) {
  for (int n : {2, 5, 50}) {
    ConnectivityGame g(n);
    const Vector ne = *g.known_ne();
    EXPECT_LT(game_mapping(g, ne).lpNorm<Eigen::Infinity>(), 1e-12);
    EXPECT_LT((quadratic_ne_oracle(g) - ne).lpNorm<Eigen::Infinity>(), 1e-10);
  }
}

TEST(Connectivity, GradientMatchesFiniteDifferences) {
  ConnectivityGame g(6);
  RngStream rng(4, StreamPurpose::certification);
  Vector x(g.dim());
  for (int t = 0; t < x.size(); ++t) x(t) = rng.normal();
  const double h = 1e-6;
  for (int i = 0; i < g.players(); ++i) {
    const Vector grad = g.partial_gradient(i, x);
    for (int c = 0; c < 2; ++c) {
      Vector xp = x, xm = x;
      xp(2 * i + c) += h;
      xm(2 * i + c) -= h;
      EXPECT_NEAR((g.cost(i, xp) - g.cost(i, xm)) / (2 * h), grad(c), 1e-5);
    }
  }
}

TEST(Connectivity, LipschitzMatchesClosedForm) {
  ConnectivityGame g(7);
  const Vector L = g.player_lipschitz();
  for (int i = 0; i < 7; ++i) EXPECT_NEAR(L(i), g.analytic_lipschitz(i), 1e-10);
  const auto gc = estimate_game_constants(g);
  EXPECT_NEAR(gc.L_m, g.analytic_lipschitz(6), 1e-10);
  EXPECT_GT(gc.mu_r, 0.0);
}

TEST(Quadratic, MappingExample) {
  // J1 = x1^2 + x1 x2, J2 = x2^2 - x1 x2.
  QuadraticGame g(mat2(2, 1, -1, 2), Vector::Zero(2));
  EXPECT_EQ(game_mapping(g, vec({1, 1})), vec({3, 1}));
  EXPECT_EQ(quadratic_ne_oracle(g), Vector::Zero(2));
}

TEST(Quadratic, OracleSolves) {
  QuadraticGame g(mat2(2, 0, 0, 2), vec({-2, -4}));
  EXPECT_TRUE(quadratic_ne_oracle(g).isApprox(vec({1, 2})));
  QuadraticGame sing(mat2(1, 1, 1, 1), vec({1, 1}));
  EXPECT_THROW(quadratic_ne_oracle(sing), std::domain_error);
}

TEST(Quadratic, Constants) {
  auto gc = estimate_game_constants(QuadraticGame(mat2(2, 1, -1, 2), Vector::Zero(2)));
  EXPECT_NEAR(gc.mu_r, 2.0, 1e-12);
  EXPECT_NEAR(gc.L_mapping, std::sqrt(5.0), 1e-12);
  gc = estimate_game_constants(QuadraticGame(mat2(2, 0, 0, 2), Vector::Zero(2)));
  EXPECT_NEAR(gc.mu_r, 2.0, 1e-12);
  EXPECT_NEAR(gc.L_mapping, 2.0, 1e-12);
  EXPECT_THROW(estimate_game_constants(QuadraticGame(mat2(1, 0, 0, -1), Vector::Zero(2))), std::domain_error);
}

TEST(Quadratic, CsvLoading) {
  std::istringstream in("2, 1\n-1, 2\n");
  const auto M = read_matrix_csv(in);
  EXPECT_EQ(M, mat2(2, 1, -1, 2));
}
