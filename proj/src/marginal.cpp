#include "slabspike/marginal.hpp"

#include <algorithm>
#include <cmath>

#include "slabspike/errors.hpp"

namespace slabspike {
namespace {

constexpr double kJitterScale = 1e-10;

// In-place update of a lower Cholesky factor L to the factor of L L' + v v'.
void cholesky_rank_one_update(Eigen::Ref<Matrix> lower, Vector v) {
  const Index m = lower.rows();
  for (Index c = 0; c < m; ++c) {
    const double d = lower(c, c);
    const double r = std::hypot(d, v[c]);
    const double cs = r / d;
    const double sn = v[c] / d;
    lower(c, c) = r;
    for (Index i = c + 1; i < m; ++i) {
      lower(i, c) = (lower(i, c) + sn * v[i]) / cs;
      v[i] = cs * v[i] - sn * lower(i, c);
    }
  }
}

}  // namespace

bool ActiveSet::contains(Index i) const { return std::find(indices.begin(), indices.end(), i) != indices.end(); }

void ActiveSet::validate(Index k) const {
  if (indices.size() != scales.size()) throw DomainError("active set: index and scale counts differ");
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (indices[j] < 0 || indices[j] >= k) throw DomainError("active set: index out of range");
    if (j > 0 && indices[j] <= indices[j - 1]) throw DomainError("active set: indices must be strictly increasing");
    if (!(scales[j] > 0.0)) throw DomainError("active set: scales must be positive");
  }
}

ActiveSet ActiveSet::from_inclusion(const Eigen::VectorXi& z, const Vector& lambda2) {
  ActiveSet a;
  for (Index i = 0; i < z.size(); ++i) {
    if (z[i] != 0) {
      a.indices.push_back(i);
      a.scales.push_back(lambda2.size() > 0 ? lambda2[i] : 1.0);
    }
  }
  return a;
}

Matrix project_out(const Matrix& u, const Matrix& m) {
  if (u.cols() == 0) return m;
  Eigen::ColPivHouseholderQR<Matrix> qr(u);
  if (qr.rank() < u.cols()) throw DataError("always-included predictors are collinear");
  const Matrix q = qr.householderQ() * Matrix::Identity(u.rows(), u.cols());
  return m - q * (q.transpose() * m);
}

ProjectedGram ProjectedGram::from(const Dataset& data) {
  ProjectedGram g;
  const Index n = data.n();
  if (data.l() > 0 && n > 0) {
    Matrix joined(n, data.k() + 1);
    joined << data.x, data.y;
    const Matrix r = project_out(data.u, joined);
    const auto xr = r.leftCols(data.k());
    const auto yr = r.col(data.k());
    g.xtx = xr.transpose() * xr;
    g.xty = xr.transpose() * yr;
    g.yty = yr.squaredNorm();
  } else {
    g.xtx = data.x.transpose() * data.x;
    g.xty = data.x.transpose() * data.y;
    g.yty = data.y.squaredNorm();
  }
  g.dof = n - data.l();
  return g;
}

IncrementalMarginal::IncrementalMarginal(const ProjectedGram& gram, double gamma2, SigmaPrior prior)
    : gram_(&gram), gamma2_(gamma2), prior_(prior) {
  if (!(gamma2 > 0.0)) throw DomainError("gamma2 must be positive");
  reset({});
}

double IncrementalMarginal::exponent() const { return prior_.shape + 0.5 * static_cast<double>(gram_->dof); }

void IncrementalMarginal::check_ssr() const {
  if (exponent() > 0.0 && !(ssr_ + 2.0 * prior_.rate > 0.0))
    throw NumericalError("non-positive residual sum of squares", indices_);
}

void IncrementalMarginal::reset(const ActiveSet& active) {
  indices_ = active.indices;
  scales_ = active.scales;
  const Index s = static_cast<Index>(indices_.size());
  Matrix a(s, s);
  sum_log_scale_ = 0.0;
  for (Index r = 0; r < s; ++r) {
    for (Index c = 0; c < s; ++c) a(r, c) = gram_->xtx(indices_[r], indices_[c]);
    a(r, r) += 1.0 / (gamma2_ * scales_[r]);
    sum_log_scale_ += std::log(gamma2_ * scales_[r]);
  }
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    a.diagonal().array() += kJitterScale * a.trace() / static_cast<double>(s);
    llt.compute(a);
    if (llt.info() != Eigen::Success) throw NumericalError("factorization of A failed after jitter", indices_);
  }
  chol_ = llt.matrixL();
  refresh_from_factor();
}

void IncrementalMarginal::refresh_from_factor() {
  const Index s = static_cast<Index>(indices_.size());
  Vector b(s);
  for (Index r = 0; r < s; ++r) b[r] = gram_->xty(indices_[r]);
  w_ = chol_.triangularView<Eigen::Lower>().solve(b);
  log_det_ = 2.0 * chol_.diagonal().array().log().sum();
  ssr_ = gram_->yty - w_.squaredNorm();
  check_ssr();
}

double IncrementalMarginal::log_marginal() const {
  const double e = exponent();
  const double tail = e > 0.0 ? e * std::log(ssr_ + 2.0 * prior_.rate) : 0.0;
  return -0.5 * sum_log_scale_ - 0.5 * log_det_ - tail;
}

double IncrementalMarginal::log_bayes_factor_add(Index i, double lambda2_i) const {
  const Index s = static_cast<Index>(indices_.size());
  Vector cross(s);
  for (Index r = 0; r < s; ++r) cross[r] = gram_->xtx(indices_[r], i);
  const Vector l = chol_.triangularView<Eigen::Lower>().solve(cross);
  const double diag = gram_->xtx(i, i) + 1.0 / (gamma2_ * lambda2_i);
  const double d2 = diag - l.squaredNorm();
  if (!(d2 > 1e-12 * diag)) {
    IncrementalMarginal with = *this;
    with.add(i, lambda2_i);
    return with.log_marginal() - log_marginal();
  }
  const double w_new = (gram_->xty(i) - l.dot(w_)) / std::sqrt(d2);
  const double ssr_new = ssr_ - w_new * w_new;
  const double e = exponent();
  double tail = 0.0;
  if (e > 0.0) {
    if (!(ssr_new + 2.0 * prior_.rate > 0.0)) {
      auto with_set = indices_;
      with_set.push_back(i);
      throw NumericalError("non-positive residual sum of squares", with_set);
    }
    tail = e * (std::log(ssr_new + 2.0 * prior_.rate) - std::log(ssr_ + 2.0 * prior_.rate));
  }
  return -0.5 * std::log(gamma2_ * lambda2_i) - 0.5 * std::log(d2) - tail;
}

void IncrementalMarginal::add(Index i, double lambda2_i) {
  const Index s = static_cast<Index>(indices_.size());
  Vector cross(s);
  for (Index r = 0; r < s; ++r) cross[r] = gram_->xtx(indices_[r], i);
  const Vector l = chol_.triangularView<Eigen::Lower>().solve(cross);
  const double diag = gram_->xtx(i, i) + 1.0 / (gamma2_ * lambda2_i);
  const double d2 = diag - l.squaredNorm();
  indices_.push_back(i);
  scales_.push_back(lambda2_i);
  if (!(d2 > 1e-12 * diag)) {
    // Fall back to a fresh (possibly jittered) factorization.
    ActiveSet a{indices_, scales_};
    reset(a);
    return;
  }
  chol_.conservativeResize(s + 1, s + 1);
  chol_.row(s).head(s) = l.transpose();
  chol_.col(s).head(s).setZero();
  chol_(s, s) = std::sqrt(d2);
  const double w_new = (gram_->xty(i) - l.dot(w_)) / chol_(s, s);
  w_.conservativeResize(s + 1);
  w_[s] = w_new;
  sum_log_scale_ += std::log(gamma2_ * lambda2_i);
  log_det_ += std::log(d2);
  ssr_ = gram_->yty - w_.squaredNorm();
  check_ssr();
}

void IncrementalMarginal::remove(Index i) {
  const auto it = std::find(indices_.begin(), indices_.end(), i);
  if (it == indices_.end()) throw DomainError("remove: predictor is not active");
  const Index p = static_cast<Index>(it - indices_.begin());
  const Index s = static_cast<Index>(indices_.size());
  const Index tail = s - p - 1;

  Matrix reduced(s - 1, s - 1);
  reduced.setZero();
  reduced.topLeftCorner(p, p) = chol_.topLeftCorner(p, p);
  if (tail > 0) {
    reduced.bottomLeftCorner(tail, p) = chol_.bottomLeftCorner(tail, p);
    reduced.bottomRightCorner(tail, tail) = chol_.bottomRightCorner(tail, tail);
    cholesky_rank_one_update(reduced.bottomRightCorner(tail, tail), chol_.col(p).tail(tail));
  }
  chol_ = std::move(reduced);
  sum_log_scale_ -= std::log(gamma2_ * scales_[static_cast<std::size_t>(p)]);
  indices_.erase(it);
  scales_.erase(scales_.begin() + p);
  refresh_from_factor();
}

double log_marginal(const ProjectedGram& gram, const ActiveSet& active, double gamma2, SigmaPrior prior) {
  active.validate(gram.xtx.rows());
  IncrementalMarginal m(gram, gamma2, prior);
  m.reset(active);
  return m.log_marginal();
}

double log_marginal(const Dataset& data, const ActiveSet& active, double gamma2) {
  const auto gram = ProjectedGram::from(data);
  return log_marginal(gram, active, gamma2);
}

double log_bayes_factor(const Dataset& data, const ActiveSet& active_without_i, Index i, double lambda2_i,
                        double gamma2) {
  if (active_without_i.contains(i)) throw DomainError("log_bayes_factor: predictor already active");
  if (i < 0 || i >= data.k()) throw DomainError("log_bayes_factor: index out of range");
  const auto gram = ProjectedGram::from(data);
  active_without_i.validate(data.k());
  IncrementalMarginal m(gram, gamma2);
  m.reset(active_without_i);
  return m.log_bayes_factor_add(i, lambda2_i);
}

}  // namespace slabspike
