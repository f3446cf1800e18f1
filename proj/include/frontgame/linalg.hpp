#pragma once

#include <Eigen/Dense>

namespace frontgame {

// Dimension is 2 or 3, so all vectors and matrices fit in fixed storage.
inline constexpr int kMaxDim = 3;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim,
                          kMaxDim>;

}  // namespace frontgame
