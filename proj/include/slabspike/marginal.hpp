#pragma once

#include <vector>

#include "slabspike/dataset.hpp"
#include "slabspike/types.hpp"

namespace slabspike {

/// Set form of the inclusion vector: included predictors with their latent
/// scales lambda_i^2.
struct ActiveSet {
  std::vector<Index> indices;
  std::vector<double> scales;

  Index size() const { return static_cast<Index>(indices.size()); }
  bool contains(Index i) const;

  /// Indices strictly increasing within [0, k), scales strictly positive.
  void validate(Index k) const;

  /// Active set of an inclusion vector (nonzero entries) with matching scales.
  static ActiveSet from_inclusion(const Eigen::VectorXi& z, const Vector& lambda2);
};

/// Inverse-gamma prior on sigma^2.  shape = rate = 0 is the improper 1/sigma^2
/// prior used by the model; proper values only serve prior-simulation checks.
struct SigmaPrior {
  double shape = 0.0;
  double rate = 0.0;
};

/// X and y with the always-included block projected out (M_U X, M_U y),
/// reduced to the Gram quantities the collapsed marginal needs.
struct ProjectedGram {
  Matrix xtx;        // X' M_U X
  Vector xty;        // X' M_U y
  double yty = 0.0;  // y' M_U y
  Index dof = 0;     // n - l

  static ProjectedGram from(const Dataset& data);
};

/// Residual-maker projection: returns M_U * m (m unchanged when U is empty).
Matrix project_out(const Matrix& u, const Matrix& m);

/// log m(z | gamma2, lambda2), up to an additive constant that does not depend
/// on the active set:
///   -1/2 sum log(g2 l_i) - 1/2 log det A - (a0 + (n - l)/2) log(SSR + 2 b0)
/// with A = X_A' M_U X_A + D^{-1} and SSR = y' M_U y - b' A^{-1} b.
double log_marginal(const ProjectedGram& gram, const ActiveSet& active, double gamma2,
                    SigmaPrior prior = {});
double log_marginal(const Dataset& data, const ActiveSet& active, double gamma2);

/// log m(active + i) - log m(active).
double log_bayes_factor(const Dataset& data, const ActiveSet& active_without_i, Index i,
                        double lambda2_i, double gamma2);

/// Cholesky factor of A for the current active set, kept in sync across
/// single-predictor additions (bordering, O(s^2)) and removals (row deletion
/// plus rank-one update, O(s^2)).  One instance per chain.
class IncrementalMarginal {
 public:
  IncrementalMarginal(const ProjectedGram& gram, double gamma2, SigmaPrior prior = {});

  /// Fresh factorization for `active`; jitters once on failure.
  void reset(const ActiveSet& active);

  double log_marginal() const;
  /// Residual sum of squares with beta (and phi) integrated out.
  double ssr() const { return ssr_; }

  /// log m(active + i) - log m(active); i must be inactive.
  double log_bayes_factor_add(Index i, double lambda2_i) const;
  void add(Index i, double lambda2_i);
  void remove(Index i);

  const std::vector<Index>& active() const { return indices_; }
  double gamma2() const { return gamma2_; }

 private:
  double exponent() const;
  void check_ssr() const;
  void refresh_from_factor();

  const ProjectedGram* gram_;
  double gamma2_;
  SigmaPrior prior_;
  std::vector<Index> indices_;  // insertion order, not sorted
  std::vector<double> scales_;
  Matrix chol_;  // lower triangular, s x s
  Vector w_;     // chol^{-1} b
  double sum_log_scale_ = 0.0;
  double log_det_ = 0.0;
  double ssr_ = 0.0;
};

}  // namespace slabspike
