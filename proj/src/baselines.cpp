#include "slabspike/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "slabspike/errors.hpp"
#include "slabspike/marginal.hpp"

namespace slabspike {
namespace {

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

}  // namespace

Vector ridge_fit(const Matrix& x, const Vector& y, double lambda_r2) {
  if (!(lambda_r2 >= 0.0)) throw DomainError("ridge penalty must be non-negative");
  if (x.rows() != y.size()) throw DomainError("ridge: X and y row counts differ");
  Matrix a = x.transpose() * x;
  a.diagonal().array() += lambda_r2;
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success || llt.rcond() < 1e-13)
    throw DomainError("ridge system is singular; use a positive penalty");
  return llt.solve(x.transpose() * y);
}

double lasso_objective(const Matrix& x, const Vector& y, const Vector& beta, double lambda_l) {
  return (y - x * beta).squaredNorm() + lambda_l * beta.lpNorm<1>();
}

double lasso_kkt_residual(const Matrix& x, const Vector& y, const Vector& beta, double lambda_l) {
  // d RSS / d b_j = -2 x_j' r
  const Vector grad = -2.0 * x.transpose() * (y - x * beta);
  double worst = 0.0;
  for (Index j = 0; j < beta.size(); ++j) {
    const double v = beta[j] != 0.0 ? std::abs(grad[j] + lambda_l * (beta[j] > 0 ? 1.0 : -1.0))
                                    : std::max(0.0, std::abs(grad[j]) - lambda_l);
    worst = std::max(worst, v);
  }
  return worst;
}

LassoResult lasso_fit(const Matrix& x, const Vector& y, double lambda_l, double tol, long max_iter) {
  if (!(lambda_l >= 0.0)) throw DomainError("lasso penalty must be non-negative");
  if (x.rows() != y.size()) throw DomainError("lasso: X and y row counts differ");
  const Index k = x.cols();
  const Vector col_ss = x.colwise().squaredNorm().transpose();

  LassoResult out;
  out.beta = Vector::Zero(k);
  Vector resid = y;
  for (out.iterations = 1; out.iterations <= max_iter; ++out.iterations) {
    double max_change = 0.0;
    for (Index j = 0; j < k; ++j) {
      if (col_ss[j] == 0.0) continue;
      const double old = out.beta[j];
      // Minimizer of ||r_j - x_j b||^2 + lambda |b| with r_j the partial residual.
      const double rho = x.col(j).dot(resid) + col_ss[j] * old;
      const double updated = soft_threshold(rho, 0.5 * lambda_l) / col_ss[j];
      if (updated != old) {
        resid -= (updated - old) * x.col(j);
        out.beta[j] = updated;
        max_change = std::max(max_change, std::abs(updated - old));
      }
    }
    if (max_change < tol) {
      out.converged = true;
      break;
    }
  }
  out.iterations = std::min(out.iterations, max_iter);
  out.objective = lasso_objective(x, y, out.beta, lambda_l);
  return out;
}

Vector ridge_fit(const Dataset& data, double lambda_r2) {
  if (data.l() == 0) return ridge_fit(data.x, data.y, lambda_r2);
  return ridge_fit(project_out(data.u, data.x), project_out(data.u, data.y), lambda_r2);
}

LassoResult lasso_fit(const Dataset& data, double lambda_l, double tol, long max_iter) {
  if (data.l() == 0) return lasso_fit(data.x, data.y, lambda_l, tol, max_iter);
  return lasso_fit(project_out(data.u, data.x), project_out(data.u, data.y), lambda_l, tol, max_iter);
}

}  // namespace slabspike
