#pragma once

#include <Eigen/Core>

namespace joinrelax::tensor {

// Row-major 64-bit dense matrix; the value type of every tensor in the project.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Entry-wise flags (true = masked out).
using Mask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace joinrelax::tensor
