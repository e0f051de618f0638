#pragma once

#include <Eigen/Dense>

namespace dnes {

/// Stacked per-agent state: row i belongs to agent i.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

}  // namespace dnes
