#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "slabspike/errors.hpp"
#include "slabspike/types.hpp"

namespace slabspike {

enum class SlabFamily { Gaussian, StudentT };

/// Slab distribution of a nonzero coefficient: N(0, s2 g2) or t_nu(0, s2 g2)
/// represented as a scale mixture with latent lambda^2 ~ IG(nu/2, nu/2).
struct Slab {
  SlabFamily family = SlabFamily::Gaussian;
  double nu = std::numeric_limits<double>::infinity();

  static Slab gaussian() { return {}; }
  static Slab student_t(double nu) { return {SlabFamily::StudentT, nu}; }

  bool is_student_t() const { return family == SlabFamily::StudentT; }
  /// "gaussian" or "t<nu>".
  std::string label() const;
};

/// Everything needed to run one chain besides the data.
struct SlabSpec {
  Slab slab;
  int grid_q = 100;
  int grid_r2 = 100;
  long n_iter = 22000;
  long n_burn = 2000;
  long thin = 10;
  std::uint64_t seed = 0;

  /// Throws DomainError on nu <= 2, n_burn >= n_iter, thin < 1, grid < 2.
  void validate() const;
  long stored_draws() const { return (n_iter - n_burn) / thin; }
};

/// Mean per-column sample variance of X, inflated by nu/(nu - 2) under the
/// Student-t slab so R^2 keeps its meaning as implied explained variance.
struct VbarX {
  double value = 1.0;
};

VbarX vbar_x(const Matrix& x, const Slab& slab);

/// Inverse of r2_from_gamma2_q: gamma^2 = r2 / ((1 - r2) q k vbar).
template <typename Scalar>
Scalar gamma2_from_r2_q(Scalar r2, Scalar q, Index k, Scalar vbar) {
  if (!(r2 > Scalar(0) && r2 < Scalar(1))) throw DomainError("r2 must lie in the open interval (0, 1)");
  if (!(q > Scalar(0) && q <= Scalar(1))) throw DomainError("q must lie in (0, 1]");
  if (k < 1 || !(vbar > Scalar(0))) throw DomainError("k and vbar must be positive");
  return r2 / ((Scalar(1) - r2) * q * static_cast<Scalar>(k) * vbar);
}

/// Implied R^2 of the prior: q k g2 vbar / (q k g2 vbar + 1).
template <typename Scalar>
Scalar r2_from_gamma2_q(Scalar gamma2, Scalar q, Index k, Scalar vbar) {
  if (!(gamma2 > Scalar(0))) throw DomainError("gamma2 must be positive");
  const Scalar t = q * static_cast<Scalar>(k) * gamma2 * vbar;
  return t / (t + Scalar(1));
}

template <typename Scalar>
Scalar gamma2_from_r2_q(Scalar r2, Scalar q, Index k, VbarX vbar) {
  return gamma2_from_r2_q<Scalar>(r2, q, k, static_cast<Scalar>(vbar.value));
}

template <typename Scalar>
Scalar r2_from_gamma2_q(Scalar gamma2, Scalar q, Index k, VbarX vbar) {
  return r2_from_gamma2_q<Scalar>(gamma2, q, k, static_cast<Scalar>(vbar.value));
}

/// Cell midpoints (i + 1/2)/m of a uniform partition of (0, 1).
std::vector<double> midpoint_grid(int cells);

// Prior families for coefficient moments.
struct GaussianPrior {
  double lambda_r;  // density proportional to exp(-lambda_r^2 b^2 / 2)
};
struct LaplacePrior {
  double lambda_l;  // density proportional to exp(-lambda_l |b| / 2)
};
struct StudentTPrior {
  double nu;
  double scale2;  // sigma^2 gamma^2
};
using CoefficientPrior = std::variant<GaussianPrior, LaplacePrior, StudentTPrior>;

struct SlabMoments {
  double mean = 0.0;
  double variance = 0.0;
  double excess_kurtosis = 0.0;  // +inf when undefined by heavy tails
};

SlabMoments slab_moments(const CoefficientPrior& prior);

}  // namespace slabspike
