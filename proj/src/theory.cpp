#include "dnes/theory.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace dnes {

double lipschitz_LF(double eta, double L_m, double fro_I_minus_W) { return eta * L_m + fro_I_minus_W; }

MonotonicityConstants monotone_muF(double eta, double mu_r, int n, double L_m, double lambda_min_tilde) {
  if (!(eta > 0.0 && mu_r > 0.0 && L_m > 0.0 && n > 0)) {
    throw std::invalid_argument("monotone_muF: eta, mu_r, L_m and n must be positive");
  }
  MonotonicityConstants mc;
  const double rhs = mu_r / (2.0 * n * eta * L_m);
  mc.beta = -1.0 + std::sqrt(1.0 + rhs);
  const double beta_sq = mc.beta * mc.beta;
  mc.b1 = eta * mu_r / (2.0 * n);
  mc.b2 = beta_sq * lambda_min_tilde / (beta_sq + 1.0) - eta * eta * L_m;
  mc.mu_F = std::min(mc.b1, mc.b2);
  return mc;
}

EtcConstants etc_constants(double alpha, double r, double delta, double C_comp, double fro_I_minus_W, double L_F,
                           double mu_F, double gamma) {
  if (!(r > 0.0 && alpha > 0.0 && alpha <= 1.0 / r)) throw std::invalid_argument("etc_constants: alpha outside (0, 1/r]");
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("etc_constants: delta outside (0, 1]");
  if (!(mu_F > 0.0 && mu_F < L_F)) throw std::invalid_argument("etc_constants: requires 0 < mu_F < L_F");
  if (C_comp < 0.0) throw std::invalid_argument("etc_constants: negative compression constant");

  EtcConstants e;
  const double LF2 = L_F * L_F, mu2 = mu_F * mu_F;
  const double fro2 = fro_I_minus_W * fro_I_minus_W;
  const double ard = alpha * r * delta;
  const double g2 = gamma * gamma;

  e.c1 = (2.0 * LF2 - mu2) / (2.0 * LF2 - 2.0 * mu2);
  e.c2 = 2.0 * e.c1 * fro2 * C_comp / (e.c1 - 1.0);
  e.c3 = (4.0 - 2.0 * ard) / ard;
  e.c4 = 2.0 * e.c3 * C_comp * fro2;
  e.c_x = (2.0 - ard) / 2.0;

  e.A << e.c1 * (1.0 + LF2 * g2 - 2.0 * mu_F * gamma), e.c2 * g2,
         e.c3 * g2 * LF2, e.c_x + e.c4 * g2;
  e.B << e.c2 * g2, e.c4 * g2;
  return e;
}

SetcConstants setc_constants(const EtcConstants& etc, double L_F, double mu_F, double gamma, double kappa, double a) {
  if (!(kappa > 1.0)) throw std::invalid_argument("setc_constants: kappa must exceed 1");
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("setc_constants: zeta lower bound must lie in (0, 1)");
  SetcConstants s;
  s.l = std::log(kappa) - std::log(a);
  const double gain = s.l * s.l + 1.0;
  s.c5 = etc.c2 * gain;
  s.c6 = etc.c4 * gain;
  const double g2 = gamma * gamma;
  s.Cmat << etc.c1 * (1.0 + L_F * L_F * g2 - 2.0 * mu_F * gamma), s.c5 * g2,
            etc.c3 * g2 * L_F * L_F, etc.c_x + s.c6 * g2;
  return s;
}

double eta_bound_m(double c_first, double c3, double c_second, double fro_I_minus_W) {
  const double f2 = fro_I_minus_W * fro_I_minus_W;
  const double f4 = f2 * f2;
  return 4.0 * c_first * c3 / f4 + 1.0 / (4.0 * f2) + c_second / f4;
}

double eta_bound(int n, double mu_r, double L_m, double lambda_min_tilde, double m, double c_x) {
  if (!(c_x < 1.0)) throw std::domain_error("eta_bound: c_x >= 1, alpha is inadmissible");
  if (!(m > 0.0)) throw std::invalid_argument("eta_bound: m must be positive");
  const double first = (2.0 * n / mu_r) * std::sqrt((1.0 - c_x) / m);
  const double second = std::sqrt(lambda_min_tilde / (2.0 * L_m));
  const double third = mu_r / (6.0 * n * L_m);
  return std::min({first, second, third});
}

double spectral_radius_2x2(const Matrix2& M) {
  const double tr = M.trace();
  const double det = M.determinant();
  const double disc = tr * tr - 4.0 * det;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    return std::max(std::abs(0.5 * (tr + s)), std::abs(0.5 * (tr - s)));
  }
  // Complex pair: |lambda|^2 = det.
  return std::sqrt(det);
}

TheoryReport evaluate_theory(const TheoryInputs& in, double eta) {
  TheoryReport rep;
  rep.eta = eta;
  rep.L_F = lipschitz_LF(eta, in.L_m, in.fro_I_minus_W);
  rep.mono = monotone_muF(eta, in.mu_r, in.n, in.L_m, in.lambda_min_tilde);
  rep.admissible = rep.mono.admissible() && rep.mono.mu_F < rep.L_F;
  if (!rep.admissible) return rep;

  const double mu = rep.mono.mu_F;
  rep.gamma_star = mu / (rep.L_F * rep.L_F);
  rep.etc = etc_constants(in.alpha, in.r, in.delta, in.C, in.fro_I_minus_W, rep.L_F, mu, rep.gamma_star);
  rep.setc = setc_constants(rep.etc, rep.L_F, mu, rep.gamma_star, in.kappa, in.zeta_low);
  rep.m1 = eta_bound_m(rep.etc.c2, rep.etc.c3, rep.etc.c4, in.fro_I_minus_W);
  rep.m2 = eta_bound_m(rep.setc.c5, rep.etc.c3, rep.setc.c6, in.fro_I_minus_W);
  rep.eta_max_theorem1 = eta_bound(in.n, in.mu_r, in.L_m, in.lambda_min_tilde, rep.m1, rep.etc.c_x);
  rep.eta_max_theorem2 = eta_bound(in.n, in.mu_r, in.L_m, in.lambda_min_tilde, rep.m2, rep.etc.c_x);
  rep.rho_A = spectral_radius_2x2(rep.etc.A);
  rep.rho_C = spectral_radius_2x2(rep.setc.Cmat);
  return rep;
}

double certified_eta(const TheoryInputs& in, Theorem which, int max_halvings) {
  auto passes = [&](double eta) {
    const TheoryReport rep = evaluate_theory(in, eta);
    return which == Theorem::theorem1 ? rep.eta_certified_theorem1() : rep.eta_certified_theorem2();
  };
  double hi = std::min(std::sqrt(in.lambda_min_tilde / (2.0 * in.L_m)), in.mu_r / (6.0 * in.n * in.L_m));
  if (passes(hi)) return hi;
  double lo = hi;
  bool found = false;
  for (int t = 0; t < max_halvings; ++t) {
    lo *= 0.5;
    if (passes(lo)) {
      found = true;
      break;
    }
    hi = lo;
  }
  if (!found) return 0.0;
  // Tighten towards the boundary; lo always passes.
  for (int t = 0; t < 60; ++t) {
    const double mid = 0.5 * (lo + hi);
    if (passes(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

void write_theory_report(std::ostream& out, const TheoryInputs& in, const TheoryReport& rep) {
  out << std::setprecision(12);
  out << "n = " << in.n << '\n'
      << "L_m = " << in.L_m << '\n'
      << "mu_r = " << in.mu_r << '\n'
      << "fro_I_minus_W = " << in.fro_I_minus_W << '\n'
      << "lambda_min_tilde = " << in.lambda_min_tilde << '\n'
      << "compressor_C = " << in.C << '\n'
      << "compressor_delta = " << in.delta << '\n'
      << "compressor_r = " << in.r << '\n'
      << "alpha = " << in.alpha << '\n'
      << "kappa = " << in.kappa << '\n'
      << "zeta_low = " << in.zeta_low << '\n'
      << "eta = " << rep.eta << '\n'
      << "L_F = " << rep.L_F << '\n'
      << "beta = " << rep.mono.beta << '\n'
      << "b1 = " << rep.mono.b1 << '\n'
      << "b2 = " << rep.mono.b2 << '\n'
      << "mu_F = " << rep.mono.mu_F << '\n'
      << "admissible = " << (rep.admissible ? "true" : "false") << '\n';
  if (!rep.admissible) return;
  out << "gamma_star = " << rep.gamma_star << '\n'
      << "c1 = " << rep.etc.c1 << '\n'
      << "c2 = " << rep.etc.c2 << '\n'
      << "c3 = " << rep.etc.c3 << '\n'
      << "c4 = " << rep.etc.c4 << '\n'
      << "c_x = " << rep.etc.c_x << '\n'
      << "l = " << rep.setc.l << '\n'
      << "c5 = " << rep.setc.c5 << '\n'
      << "c6 = " << rep.setc.c6 << '\n'
      << "m1 = " << rep.m1 << '\n'
      << "m2 = " << rep.m2 << '\n'
      << "A = [[" << rep.etc.A(0, 0) << ", " << rep.etc.A(0, 1) << "], [" << rep.etc.A(1, 0) << ", "
      << rep.etc.A(1, 1) << "]]\n"
      << "B = [" << rep.etc.B(0) << ", " << rep.etc.B(1) << "]\n"
      << "Cmat = [[" << rep.setc.Cmat(0, 0) << ", " << rep.setc.Cmat(0, 1) << "], [" << rep.setc.Cmat(1, 0) << ", "
      << rep.setc.Cmat(1, 1) << "]]\n"
      << "eta_max_theorem1 = " << rep.eta_max_theorem1 << '\n'
      << "eta_max_theorem2 = " << rep.eta_max_theorem2 << '\n'
      << "eta_certified_theorem1 = " << (rep.eta_certified_theorem1() ? "true" : "false") << '\n'
      << "eta_certified_theorem2 = " << (rep.eta_certified_theorem2() ? "true" : "false") << '\n'
      << "rho_A = " << rep.rho_A << '\n'
      << "rho_Cmat = " << rep.rho_C << '\n';
}

}  // namespace dnes
