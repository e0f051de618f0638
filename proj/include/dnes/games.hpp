#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "dnes/types.hpp"

namespace dnes {

/// Game with an affine game mapping F(x) = M x + m over the joint profile
/// x in R^{n d_a}; player i owns coordinates [i d_a, (i + 1) d_a).
class AffineGame {
 public:
  AffineGame(int players, int action_dim, Eigen::MatrixXd jacobian, Vector offset);
  virtual ~AffineGame() = default;

  int players() const { return n_; }
  int action_dim() const { return d_a_; }
  /// Joint profile length n * d_a.
  int dim() const { return n_ * d_a_; }

  const Eigen::MatrixXd& jacobian() const { return M_; }
  const Vector& offset() const { return m_; }

  /// grad_i J_i evaluated at a full profile estimate (agent i's local copy).
  virtual Vector partial_gradient(int i, const Vector& x_local) const;

  /// Per-player gradient Lipschitz constants: spectral norm of player i's
  /// block of rows of M.
  Vector player_lipschitz() const;

  virtual std::optional<Vector> known_ne() const { return std::nullopt; }

 protected:
  int n_;
  int d_a_;
  Eigen::MatrixXd M_;
  Vector m_;
};

/// Stacked partial gradients at the true joint profile.
Vector game_mapping(const AffineGame& g, const Vector& x);

/// Sensor connectivity-control game: player p = i + 1 (1-based) pays
///   x_i' (p I) x_i + x_i' [p, p]' + p + sum_{j in S_i} ||x_i - x_j||^2
/// with S_i = {i + 1} and S_n = {1}. Its unique NE has every coordinate at -0.5.
class ConnectivityGame final : public AffineGame {
 public:
  explicit ConnectivityGame(int n);

  Vector partial_gradient(int i, const Vector& x_local) const override;
  std::optional<Vector> known_ne() const override;

  /// J_i at a joint profile (used for finite-difference checks).
  double cost(int i, const Vector& x) const;
  int successor(int i) const { return (i + 1) % n_; }

  /// Closed form of player_lipschitz(): sqrt((2p + 2)^2 + 4).
  double analytic_lipschitz(int i) const;
};

/// Affine game given directly by (M, m).
class QuadraticGame final : public AffineGame {
 public:
  QuadraticGame(Eigen::MatrixXd M, Vector m, int action_dim = 1);

  std::optional<Vector> known_ne() const override;
};

/// Solves M x = -m. Throws std::domain_error for singular M.
Vector quadratic_ne_oracle(const AffineGame& g);

struct GameConstants {
  double L_m = 0.0;       ///< max_i L_i
  double mu_r = 0.0;      ///< smallest eigenvalue of (M + M') / 2
  double L_mapping = 0.0; ///< largest singular value of M
};

/// Throws std::domain_error when mu_r <= 0 (not strongly monotone).
GameConstants estimate_game_constants(const AffineGame& g);

/// Dense CSV matrix reader (one row per line, comma separated).
Eigen::MatrixXd read_matrix_csv(std::istream& in);
Eigen::MatrixXd read_matrix_csv_file(const std::string& path);

/// Quadratic game from a CSV pair: square M and a vector m (one column or one row).
QuadraticGame load_quadratic_game(const std::string& matrix_path, const std::string& vector_path, int action_dim = 1);

}  // namespace dnes
