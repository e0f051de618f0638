#pragma once

#include <Eigen/Dense>
#include <iosfwd>

namespace dnes {

using Matrix2 = Eigen::Matrix2d;
using Vector2 = Eigen::Vector2d;

/// L_F = eta L_m + ||I - W||_F.
double lipschitz_LF(double eta, double L_m, double fro_I_minus_W);

struct MonotonicityConstants {
  double mu_F = 0.0;
  double beta = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  bool admissible() const { return b2 > 0.0; }
};

/// beta is the positive root of beta^2 + 2 beta = mu_r / (2 n eta L_m);
/// b1 = eta mu_r / (2n); b2 = beta^2 lambda / (beta^2 + 1) - eta^2 L_m;
/// mu_F = min(b1, b2). Check admissible() before using mu_F.
MonotonicityConstants monotone_muF(double eta, double mu_r, int n, double L_m, double lambda_min_tilde);

/// Constants of the two-dimensional error recursion V_{k+1} <= A V_k + B ||E_k||^2.
struct EtcConstants {
  double c1 = 0, c2 = 0, c3 = 0, c4 = 0, c_x = 0;
  Matrix2 A = Matrix2::Zero();
  Vector2 B = Vector2::Zero();
};

/// Throws std::invalid_argument unless alpha in (0, 1/r], delta in (0, 1] and
/// 0 < mu_F < L_F.
EtcConstants etc_constants(double alpha, double r, double delta, double C_comp, double fro_I_minus_W, double L_F,
                           double mu_F, double gamma);

/// Stochastic-trigger variant: V_{k+1} <= Cmat V_k.
struct SetcConstants {
  double l = 0, c5 = 0, c6 = 0;
  Matrix2 Cmat = Matrix2::Zero();
};

SetcConstants setc_constants(const EtcConstants& etc, double L_F, double mu_F, double gamma, double kappa, double a);

/// m1 (pass c2, c4) or m2 (pass c5, c6).
double eta_bound_m(double c_first, double c3, double c_second, double fro_I_minus_W);

/// min{ (2n / mu_r) sqrt((1 - c_x) / m), sqrt(lambda / (2 L_m)), mu_r / (6 n L_m) }.
/// Throws std::domain_error when c_x >= 1.
double eta_bound(int n, double mu_r, double L_m, double lambda_min_tilde, double m, double c_x);

/// Largest |root| of lambda^2 - tr(M) lambda + det(M).
double spectral_radius_2x2(const Matrix2& M);

/// Inputs describing one game / network / compressor / trigger combination.
struct TheoryInputs {
  int n = 0;
  double L_m = 0, mu_r = 0;
  double fro_I_minus_W = 0, lambda_min_tilde = 0;
  double C = 0, delta = 1, r = 1;
  double alpha = 0;
  double kappa = 1.5, zeta_low = 0.5;
};

/// Full evaluation at a given eta with gamma = mu_F / L_F^2.
struct TheoryReport {
  double eta = 0, gamma_star = 0, L_F = 0;
  MonotonicityConstants mono;
  EtcConstants etc;
  SetcConstants setc;
  double m1 = 0, m2 = 0;
  double eta_max_theorem1 = 0, eta_max_theorem2 = 0;
  double rho_A = 0, rho_C = 0;
  bool admissible = false;  ///< b2 > 0 and mu_F < L_F
  bool eta_certified_theorem1() const { return admissible && eta <= eta_max_theorem1; }
  bool eta_certified_theorem2() const { return admissible && eta <= eta_max_theorem2; }
};

/// Throws std::domain_error when the constants are not defined at this eta.
TheoryReport evaluate_theory(const TheoryInputs& in, double eta);

enum class Theorem { theorem1, theorem2 };

/// The stepsize bounds depend on eta through L_F and mu_F. Halves eta from the
/// eta-independent terms until eta <= eta_max(eta) holds, then bisects towards
/// the boundary. Returns 0 when no halving step qualifies.
double certified_eta(const TheoryInputs& in, Theorem which, int max_halvings = 200);

void write_theory_report(std::ostream& out, const TheoryInputs& in, const TheoryReport& rep);

}  // namespace dnes
