#include "dnes/games.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace dnes {

AffineGame::AffineGame(int players, int action_dim, Eigen::MatrixXd jacobian, Vector offset)
    : n_(players), d_a_(action_dim), M_(std::move(jacobian)), m_(std::move(offset)) {
  if (n_ < 1 || d_a_ < 1) throw std::invalid_argument("AffineGame: players and action dimension must be positive");
  if (M_.rows() != dim() || M_.cols() != dim() || m_.size() != dim()) {
    throw std::invalid_argument("AffineGame: mapping dimensions do not match players * action_dim");
  }
}

Vector AffineGame::partial_gradient(int i, const Vector& x_local) const {
  if (i < 0 || i >= n_) throw std::out_of_range("partial_gradient: player index out of range");
  return M_.middleRows(static_cast<Eigen::Index>(i) * d_a_, d_a_) * x_local +
         m_.segment(static_cast<Eigen::Index>(i) * d_a_, d_a_);
}

Vector AffineGame::player_lipschitz() const {
  Vector L(n_);
  for (int i = 0; i < n_; ++i) {
    const Eigen::MatrixXd block = M_.middleRows(static_cast<Eigen::Index>(i) * d_a_, d_a_);
    // Spectral norm of a short-wide block via its d_a x d_a Gram matrix.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block * block.transpose(), Eigen::EigenvaluesOnly);
    L(i) = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  }
  return L;
}

Vector game_mapping(const AffineGame& g, const Vector& x) {
  if (x.size() != g.dim()) throw std::invalid_argument("game_mapping: profile has wrong dimension");
  Vector F(g.dim());
  for (int i = 0; i < g.players(); ++i) {
    F.segment(static_cast<Eigen::Index>(i) * g.action_dim(), g.action_dim()) = g.partial_gradient(i, x);
  }
  return F;
}

// ------------------------------------------------------------ connectivity

namespace {

constexpr int kSensorDim = 2;

Eigen::MatrixXd connectivity_jacobian(int n) {
  const int N = n * kSensorDim;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < n; ++i) {
    const double p = i + 1;
    const int j = (i + 1) % n;
    for (int c = 0; c < kSensorDim; ++c) {
      const int row = i * kSensorDim + c;
      M(row, row) += 2.0 * p + 2.0;
      M(row, j * kSensorDim + c) -= 2.0;
    }
  }
  return M;
}

Vector connectivity_offset(int n) {
  Vector m(n * kSensorDim);
  for (int i = 0; i < n; ++i) m.segment(i * kSensorDim, kSensorDim).setConstant(i + 1.0);
  return m;
}

}  // namespace

ConnectivityGame::ConnectivityGame(int n)
    : AffineGame(n, kSensorDim, connectivity_jacobian(n >= 2 ? n : 2), connectivity_offset(n >= 2 ? n : 2)) {
  if (n < 2) throw std::invalid_argument("ConnectivityGame: needs at least two sensors");
}

Vector ConnectivityGame::partial_gradient(int i, const Vector& x_local) const {
  if (i < 0 || i >= n_) throw std::out_of_range("partial_gradient: player index out of range");
  const double p = i + 1;
  const auto xi = x_local.segment<kSensorDim>(i * kSensorDim);
  const auto xj = x_local.segment<kSensorDim>(successor(i) * kSensorDim);
  return 2.0 * p * xi + Vector::Constant(kSensorDim, p) + 2.0 * (xi - xj);
}

std::optional<Vector> ConnectivityGame::known_ne() const { return Vector::Constant(dim(), -0.5); }

double ConnectivityGame::cost(int i, const Vector& x) const {
  const double p = i + 1;
  const auto xi = x.segment<kSensorDim>(i * kSensorDim);
  const auto xj = x.segment<kSensorDim>(successor(i) * kSensorDim);
  return p * xi.squaredNorm() + p * xi.sum() + p + (xi - xj).squaredNorm();
}

double ConnectivityGame::analytic_lipschitz(int i) const {
  const double p = i + 1;
  return std::sqrt((2.0 * p + 2.0) * (2.0 * p + 2.0) + 4.0);
}

// --------------------------------------------------------------- quadratic

namespace {

int player_count(const Eigen::MatrixXd& M, int action_dim) {
  return action_dim > 0 ? static_cast<int>(M.rows()) / action_dim : 0;
}

}  // namespace

QuadraticGame::QuadraticGame(Eigen::MatrixXd M, Vector m, int action_dim)
    : AffineGame(player_count(M, action_dim), action_dim, M, std::move(m)) {}

std::optional<Vector> QuadraticGame::known_ne() const {
  try {
    return quadratic_ne_oracle(*this);
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
}

Vector quadratic_ne_oracle(const AffineGame& g) {
  const auto& M = g.jacobian();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  if (!lu.isInvertible()) throw std::domain_error("quadratic_ne_oracle: game mapping matrix is singular");
  Vector x = lu.solve(-g.offset());
  // One refinement step keeps the residual at round-off level for moderately
  // conditioned M.
  x -= lu.solve(M * x + g.offset());
  return x;
}

GameConstants estimate_game_constants(const AffineGame& g) {
  const auto& M = g.jacobian();
  GameConstants gc;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sym(0.5 * (M + M.transpose()), Eigen::EigenvaluesOnly);
  gc.mu_r = sym.eigenvalues().minCoeff();
  if (!(gc.mu_r > 0.0)) {
    throw std::domain_error("estimate_game_constants: symmetric part of the game mapping is not positive definite");
  }
  gc.L_m = g.player_lipschitz().maxCoeff();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  gc.L_mapping = svd.singularValues()(0);
  return gc;
}

// --------------------------------------------------------------------- I/O

Eigen::MatrixXd read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error("matrix csv: bad number '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw std::runtime_error("matrix csv: ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("matrix csv: empty input");
  Eigen::MatrixXd out(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return out;
}

Eigen::MatrixXd read_matrix_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_matrix_csv(in);
}

QuadraticGame load_quadratic_game(const std::string& matrix_path, const std::string& vector_path, int action_dim) {
  Eigen::MatrixXd M = read_matrix_csv_file(matrix_path);
  Eigen::MatrixXd v = read_matrix_csv_file(vector_path);
  if (M.rows() != M.cols()) throw std::runtime_error("quadratic game: '" + matrix_path + "' is not square");
  Vector m = v.cols() == 1 ? Vector(v.col(0)) : Vector(v.row(0).transpose());
  if (v.rows() != 1 && v.cols() != 1) throw std::runtime_error("quadratic game: '" + vector_path + "' is not a vector");
  if (M.rows() % action_dim != 0) {
    throw std::runtime_error("quadratic game: dimension not divisible by action dimension");
  }
  return QuadraticGame(std::move(M), std::move(m), action_dim);
}

}  // namespace dnes
