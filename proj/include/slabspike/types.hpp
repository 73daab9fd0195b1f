#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace slabspike {

// Dense types are templated on the scalar; the sampler itself runs in double.
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vector = VectorX<double>;
using Matrix = MatrixX<double>;
using Index = Eigen::Index;

using Rng = std::mt19937_64;

}  // namespace slabspike
