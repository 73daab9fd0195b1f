#pragma once

#include <stdexcept>
#include <variant>

#include "slabspike/dataset.hpp"
#include "slabspike/types.hpp"

namespace slabspike {

struct RidgePenalty {
  double lambda_r2 = 0.0;
};
struct LassoPenalty {
  double lambda_l = 0.0;
};
using PenaltySpec = std::variant<RidgePenalty, LassoPenalty>;

/// argmin RSS + lambda_r2 ||b||^2 = (X'X + lambda_r2 I)^{-1} X'y.
/// Throws DomainError for a negative penalty or a singular unpenalized system.
Vector ridge_fit(const Matrix& x, const Vector& y, double lambda_r2);

struct LassoResult {
  Vector beta;
  double objective = 0.0;  // RSS + lambda_l ||b||_1
  long iterations = 0;
  bool converged = false;
};

/// Cyclic coordinate descent with exact soft-threshold updates on
/// RSS + lambda_l ||b||_1.  Stops when the largest coordinate change falls
/// below `tol`; hitting max_iter returns the last iterate with converged = false.
LassoResult lasso_fit(const Matrix& x, const Vector& y, double lambda_l, double tol = 1e-10,
                      long max_iter = 100000);

/// RSS + lambda_l ||b||_1.
double lasso_objective(const Matrix& x, const Vector& y, const Vector& beta, double lambda_l);

/// Largest violation of the lasso subgradient optimality conditions.
double lasso_kkt_residual(const Matrix& x, const Vector& y, const Vector& beta, double lambda_l);

/// Dataset versions: U is unpenalized, so it is projected out of X and y first.
Vector ridge_fit(const Dataset& data, double lambda_r2);
LassoResult lasso_fit(const Dataset& data, double lambda_l, double tol = 1e-10, long max_iter = 100000);

}  // namespace slabspike
