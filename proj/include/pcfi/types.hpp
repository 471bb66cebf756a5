#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace pcfi {

using NodeId = std::int32_t;

// Dense N x F feature values, column-major (one contiguous column per channel).
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// N x F observation pattern; true = observed.
using MaskMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;
using MaskVector = Eigen::Matrix<bool, Eigen::Dynamic, 1>;

// N x F shortest-path distances to the nearest source node.
using IntMatrix = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<std::int32_t, Eigen::Dynamic, 1>;

}  // namespace pcfi
