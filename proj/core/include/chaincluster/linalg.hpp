#pragma once

#include <Eigen/Dense>

namespace chaincluster {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

}  // namespace chaincluster
