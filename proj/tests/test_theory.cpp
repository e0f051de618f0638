#include <gtest/gtest.h>

#include <cmath>

#include "dnes/theory.hpp"

using namespace dnes;

TEST(Theory, LipschitzLF) {
  EXPECT_NEAR(lipschitz_LF(0.01, 5, std::sqrt(6.0)), 2.4995, 1e-4);
  EXPECT_DOUBLE_EQ(lipschitz_LF(0.0, 5, 1.7), 1.7);
  EXPECT_DOUBLE_EQ(lipschitz_LF(0.3, 0, 1.7), 1.7);
}

TEST(Theory, Monotonicity) {
  // mu_r / (2 n eta L_m) = 8.
  EXPECT_NEAR(monotone_muF(0.25, 8, 1, 2, 1).beta, 2.0, 1e-14);
  const auto mc = monotone_muF(0.01, 2, 2, std::sqrt(5.0), 1);
  EXPECT_NEAR(mc.beta, -1.0 + std::sqrt(1.0 + 2.0 / (0.04 * std::sqrt(5.0))), 1e-14);
  EXPECT_NEAR(mc.beta, 3.8259, 1e-2);
  EXPECT_NEAR(mc.b1, 0.005, 1e-15);
  EXPECT_NEAR(mc.b2, 0.9358, 1e-3);
  EXPECT_NEAR(mc.mu_F, 0.005, 1e-15);
  EXPECT_FALSE(monotone_muF(10, 2, 2, std::sqrt(5.0), 1).admissible());
}

TEST(Theory, EtcConstants) {
  const auto e = etc_constants(0.05, 1, 0.5, 0.3, 1.0, 2.0, 0.5, 0.1);
  EXPECT_NEAR(e.c_x, 0.9875, 1e-14);
  EXPECT_NEAR(e.c3, 158, 1e-10);
  EXPECT_NEAR(e.c1, 7.75 / 7.5, 1e-14);
  const auto id = etc_constants(0.05, 1, 0.5, 0.0, 1.0, 2.0, 0.5, 0.1);
  EXPECT_EQ(id.c2, 0.0);
  EXPECT_EQ(id.c4, 0.0);
  EXPECT_EQ(id.A(0, 1), 0.0);
  EXPECT_THROW(etc_constants(1.5, 1, 0.5, 0.0, 1.0, 2.0, 0.5, 0.1), std::invalid_argument);
  EXPECT_THROW(etc_constants(0.05, 1, 0.5, 0.0, 1.0, 0.4, 0.5, 0.1), std::invalid_argument);
}

TEST(Theory, SetcConstants) {
  const auto e = etc_constants(0.05, 1, 0.5, 0.3, 1.0, 2.0, 0.5, 0.1);
  const auto s = setc_constants(e, 2.0, 0.5, 0.1, 1.5, 0.5);
  EXPECT_NEAR(s.l, std::log(3.0), 1e-14);
  EXPECT_NEAR(s.l * s.l + 1.0, 2.2069, 1e-4);
  EXPECT_NEAR(s.c5, e.c2 * (s.l * s.l + 1.0), 1e-12);
  const auto near = setc_constants(e, 2.0, 0.5, 0.1, 1.0 + 1e-12, 1.0 - 1e-12);
  EXPECT_NEAR(near.c5, e.c2, 1e-9);
  EXPECT_NEAR(near.Cmat(1, 1), e.A(1, 1), 1e-9);
  const auto id = etc_constants(0.05, 1, 0.5, 0.0, 1.0, 2.0, 0.5, 0.1);
  EXPECT_EQ(setc_constants(id, 2.0, 0.5, 0.1, 1.5, 0.5).c5, 0.0);
}

TEST(Theory, EtaBoundTerms) {
  const double big_m = 1e-30;
  EXPECT_NEAR(eta_bound(2, 2, std::sqrt(5.0), 100, big_m, 0.5), 2.0 / (12.0 * std::sqrt(5.0)), 1e-12);
  EXPECT_NEAR(2.0 / (12.0 * std::sqrt(5.0)), 0.0745, 1e-4);
  EXPECT_NEAR(eta_bound(1, 1e6, 5, 1.5, big_m, 0.5), std::sqrt(1.5 / 10.0), 1e-12);
  EXPECT_NEAR(std::sqrt(0.15), 0.3873, 1e-4);
  EXPECT_LT(eta_bound(2, 2, std::sqrt(5.0), 1, 1e30, 0.5), 1e-12);
  EXPECT_THROW(eta_bound(2, 2, 1, 1, 1, 1.0), std::domain_error);
}

TEST(Theory, SpectralRadius) {
  Matrix2 M;
  M << 0.5, 0.1, 0.2, 0.4;
  EXPECT_NEAR(spectral_radius_2x2(M), 0.6, 1e-14);
  EXPECT_NEAR(spectral_radius_2x2(Matrix2::Identity()), 1.0, 1e-15);
  EXPECT_EQ(spectral_radius_2x2(Matrix2::Zero()), 0.0);
  M << 0, -1, 1, 0;
  EXPECT_NEAR(spectral_radius_2x2(M), 1.0, 1e-15);
  for (int t = 0; t < 50; ++t) {
    const Matrix2 R = Matrix2::Random();
    EXPECT_NEAR(spectral_radius_2x2(R), R.eigenvalues().cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Theory, CertifiedEtaGivesContraction) {
  TheoryInputs in;
  in.n = 2;
  in.L_m = std::sqrt(5.0);
  in.mu_r = 2;
  in.fro_I_minus_W = 1;
  in.lambda_min_tilde = 1;
  in.alpha = 1;
  for (auto which : {Theorem::theorem1, Theorem::theorem2}) {
    const double eta = certified_eta(in, which);
    ASSERT_GT(eta, 0.0);
    const auto rep = evaluate_theory(in, eta);
    ASSERT_TRUE(rep.admissible);
    EXPECT_LT(rep.rho_A, 1.0);
    EXPECT_LT(rep.rho_C, 1.0);
  }
}

TEST(Theory, LargeCompressionIsInfeasible) {
  TheoryInputs in;
  in.n = 2;
  in.L_m = std::sqrt(5.0);
  in.mu_r = 2;
  in.fro_I_minus_W = 1;
  in.lambda_min_tilde = 1;
  in.C = 0.5;
  in.r = 1.5;
  in.delta = 1.0 / 1.5;
  in.alpha = 0.05;
  EXPECT_EQ(certified_eta(in, Theorem::theorem1), 0.0);
}
