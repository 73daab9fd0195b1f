#pragma once

// Independent reference computations for the tests.  Nothing here calls the
// library's marginal-likelihood or sampling code.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "slabspike/dataset.hpp"
#include "slabspike/prior.hpp"

namespace slabspike::testing {

/// Dense textbook evaluation: explicit M_U, explicit inverse and determinant.
inline double direct_log_marginal(const Dataset& d, const std::vector<Index>& active, const std::vector<double>& scales,
                                  double gamma2) {
  const Index n = d.n();
  Matrix mu = Matrix::Identity(n, n);
  if (d.l() > 0) mu -= d.u * (d.u.transpose() * d.u).inverse() * d.u.transpose();
  const auto s = static_cast<Index>(active.size());
  Matrix xa(n, s);
  double sum_log = 0.0;
  Matrix dinv = Matrix::Zero(s, s);
  for (Index j = 0; j < s; ++j) {
    xa.col(j) = d.x.col(active[static_cast<std::size_t>(j)]);
    dinv(j, j) = 1.0 / (gamma2 * scales[static_cast<std::size_t>(j)]);
    sum_log += std::log(gamma2 * scales[static_cast<std::size_t>(j)]);
  }
  const Matrix a = xa.transpose() * mu * xa + dinv;
  const double yy = d.y.dot(mu * d.y);
  double ssr = yy;
  double logdet = 0.0;
  if (s > 0) {
    const Vector b = xa.transpose() * mu * d.y;
    ssr -= b.dot(a.inverse() * b);
    logdet = std::log(a.determinant());
  }
  return -0.5 * sum_log - 0.5 * logdet - 0.5 * static_cast<double>(n - d.l()) * std::log(ssr);
}

/// Normalizing constant linking log_marginal to the fully normalized
/// integrated likelihood when U is empty: log p(y|z) = LM + lgamma(n/2) - (n/2) log pi.
inline double marginal_constant(Index n) {
  const double h = 0.5 * static_cast<double>(n);
  return std::lgamma(h) - h * std::log(std::numbers::pi);
}

/// log of  int int N(y | X_A b, s2 I) prod N(b_i | 0, s2 g2 l_i) (1/s2) db ds2
/// by nested adaptive Gauss-Kronrod quadrature over b (|A| <= 2) and t = log s2.
inline double quadrature_log_marginal(const Dataset& d, const std::vector<Index>& active, double gamma2,
                                      const std::vector<double>& scales = {}) {
  using boost::math::quadrature::gauss_kronrod;
  const Index n = d.n();
  const auto s = active.size();
  std::vector<double> lam(s, 1.0);
  for (std::size_t j = 0; j < scales.size(); ++j) lam[j] = scales[j];

  const double yty = d.y.squaredNorm();
  const double t_mid = std::log(yty / static_cast<double>(n));
  const auto log_integrand = [&](const std::vector<double>& b, double s2) {
    Vector r = d.y;
    for (std::size_t j = 0; j < s; ++j) r -= b[j] * d.x.col(active[j]);
    double v = -0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi * s2) - r.squaredNorm() / (2.0 * s2);
    for (std::size_t j = 0; j < s; ++j) {
      const double var = s2 * gamma2 * lam[j];
      v += -0.5 * std::log(2.0 * std::numbers::pi * var) - b[j] * b[j] / (2.0 * var);
    }
    return v;
  };
  const double offset = log_integrand(std::vector<double>(s, 0.0), yty / static_cast<double>(n));
  constexpr double tol = 1e-9;
  constexpr unsigned depth = 12;

  // Integration window for coefficient j given the earlier ones: spans zero
  // and the least-squares value plus 14 least-squares standard deviations.
  // The outer coordinate uses the joint least-squares fit and its marginal sd.
  Matrix xa(n, static_cast<Index>(s));
  for (std::size_t j = 0; j < s; ++j) xa.col(static_cast<Index>(j)) = d.x.col(active[j]);
  const Matrix xtx_inv = s > 0 ? Matrix((xa.transpose() * xa).inverse()) : Matrix();
  const Vector ls_joint = s > 0 ? Vector(xtx_inv * xa.transpose() * d.y) : Vector();
  const auto window = [&](std::size_t j, const std::vector<double>& fixed, double s2) {
    double ls = 0.0;
    double sd = 0.0;
    if (j == 0) {
      ls = ls_joint[0];
      sd = std::sqrt(s2 * xtx_inv(0, 0));
    } else {
      Vector r = d.y;
      for (std::size_t i = 0; i < j; ++i) r -= fixed[i] * d.x.col(active[i]);
      const auto xj = d.x.col(active[j]);
      ls = xj.dot(r) / xj.squaredNorm();
      sd = std::sqrt(s2 / xj.squaredNorm());
    }
    return std::pair{std::min(0.0, ls) - 14.0 * sd, std::max(0.0, ls) + 14.0 * sd};
  };

  const auto over_beta = [&](double s2) -> double {
    if (s == 0) return std::exp(log_integrand({}, s2) - offset);
    if (s == 1) {
      const auto [lo, hi] = window(0, {}, s2);
      return gauss_kronrod<double, 21>::integrate(
          [&](double b0) { return std::exp(log_integrand({b0}, s2) - offset); }, lo, hi, depth, tol);
    }
    const auto [lo, hi] = window(0, {}, s2);
    return gauss_kronrod<double, 21>::integrate(
        [&](double b0) {
          const auto [lo2, hi2] = window(1, {b0}, s2);
          return gauss_kronrod<double, 21>::integrate(
              [&](double b1) { return std::exp(log_integrand({b0, b1}, s2) - offset); }, lo2, hi2, depth, tol);
        },
        lo, hi, depth, tol);
  };
  // ds2 / s2 = dt
  const double total = gauss_kronrod<double, 21>::integrate([&](double t) { return over_beta(std::exp(t)); },
                                                            t_mid - 25.0, t_mid + 25.0, depth, tol);
  return std::log(total) + offset;
}

/// Exact posterior over all 2^k inclusion vectors (Gaussian slab, lambda = 1)
/// with (q, R^2) summed over the midpoint grid.  Model m has z_i = bit i of m.
inline std::vector<double> enumerate_model_posterior(const Dataset& d, int grid_q, int grid_r2) {
  const Index k = d.k();
  const auto models = static_cast<std::size_t>(1) << k;
  const double vbar = vbar_x(d.x, Slab::gaussian()).value;
  const auto qs = midpoint_grid(grid_q);
  const auto rs = midpoint_grid(grid_r2);
  std::vector<double> logw(models);
  for (std::size_t m = 0; m < models; ++m) {
    std::vector<Index> act;
    for (Index i = 0; i < k; ++i)
      if (m >> i & 1U) act.push_back(i);
    const std::vector<double> ones(act.size(), 1.0);
    const auto s = static_cast<double>(act.size());
    std::vector<double> terms;
    for (double q : qs)
      for (double r2 : rs) {
        const double g2 = r2 / ((1.0 - r2) * q * static_cast<double>(k) * vbar);
        terms.push_back(s * std::log(q) + (static_cast<double>(k) - s) * std::log(1.0 - q) +
                        direct_log_marginal(d, act, ones, g2));
      }
    const double mx = *std::max_element(terms.begin(), terms.end());
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - mx);
    logw[m] = mx + std::log(acc);
  }
  const double mx = *std::max_element(logw.begin(), logw.end());
  std::vector<double> p(models);
  double total = 0.0;
  for (std::size_t m = 0; m < models; ++m) total += p[m] = std::exp(logw[m] - mx);
  for (auto& v : p) v /= total;
  return p;
}

/// Asymptotic Kolmogorov distribution tail P(K > sqrt(n) D), with the
/// Stephens small-sample correction.
inline double ks_p_value(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  double p = 0.0;
  for (int j = 1; j <= 100; ++j) p += 2.0 * (j % 2 ? 1.0 : -1.0) * std::exp(-2.0 * j * j * lambda * lambda);
  return std::clamp(p, 0.0, 1.0);
}

/// One-sample KS statistic of `draws` against `cdf`.
inline double ks_statistic(std::vector<double> draws, const std::function<double(double)>& cdf) {
  std::sort(draws.begin(), draws.end());
  const auto n = static_cast<double>(draws.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double f = cdf(draws[i]);
    worst = std::max({worst, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return worst;
}

/// Batch-means standard error of the mean of a correlated series.
inline double batch_means_se(const std::vector<double>& v, std::size_t batches = 100) {
  const std::size_t size = v.size() / batches;
  std::vector<double> means;
  for (std::size_t b = 0; b < batches; ++b) {
    double m = 0.0;
    for (std::size_t i = b * size; i < (b + 1) * size; ++i) m += v[i];
    means.push_back(m / static_cast<double>(size));
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= static_cast<double>(batches);
  double ss = 0.0;
  for (double m : means) ss += (m - mean) * (m - mean);
  return std::sqrt(ss / static_cast<double>(batches - 1) / static_cast<double>(batches));
}

/// Small raw dataset with standard-normal predictors and a linear response.
inline Dataset random_dataset(std::uint64_t seed, Index n, Index k, const Vector& beta, double noise,
                              Index l = 0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> norm;
  Dataset d;
  d.x.resize(n, k);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < k; ++j) d.x(i, j) = norm(rng);
  d.u.resize(n, l);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < l; ++j) d.u(i, j) = norm(rng);
  d.y.resize(n);
  for (Index i = 0; i < n; ++i) d.y[i] = noise * norm(rng);
  d.y += d.x * beta;
  d.names = default_names(k);
  d.u_names = default_names(l, "u");
  return d;
}

}  // namespace slabspike::testing
