#include "slabspike/gibbs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "slabspike/errors.hpp"
#include "slabspike/random.hpp"

namespace slabspike {
namespace {

void scan_inclusion(ChainState& state, const SamplerModel& model, Rng& rng, IncrementalMarginal& cache) {
  const double log_prior_odds = std::log(state.q) - std::log1p(-state.q);
  for (Index i = 0; i < model.k(); ++i) {
    if (state.z[i]) cache.remove(i);
    const double log_odds = log_prior_odds + cache.log_bayes_factor_add(i, state.lambda2[i]);
    const double p = 1.0 / (1.0 + std::exp(-log_odds));
    state.z[i] = draw_bernoulli(rng, p) ? 1 : 0;
    if (state.z[i]) cache.add(i, state.lambda2[i]);
  }
}

void draw_sigma2_collapsed(ChainState& state, const SamplerModel& model, Rng& rng, double ssr) {
  const SigmaPrior& prior = model.options().sigma_prior;
  const double shape = prior.shape + 0.5 * static_cast<double>(model.gram().dof);
  const double rate = prior.rate + 0.5 * ssr;
  if (!(shape > 0.0) || !(rate > 0.0))
    throw NumericalError("improper collapsed sigma2 conditional",
                         ActiveSet::from_inclusion(state.z, state.lambda2).indices);
  state.sigma2 = draw_inverse_gamma(rng, shape, rate);
}

IncrementalMarginal make_cache(const ChainState& state, const SamplerModel& model) {
  IncrementalMarginal cache(model.gram(), state.gamma2, model.options().sigma_prior);
  cache.reset(ActiveSet::from_inclusion(state.z, state.lambda2));
  return cache;
}

}  // namespace

SamplerModel::SamplerModel(Dataset data, SlabSpec spec, SamplerOptions options)
    : data_(std::move(data)), spec_(spec), options_(options) {
  spec_.validate();
  if (data_.k() < 1) throw DataError("need at least one candidate predictor");
  if (data_.x.rows() != data_.n() || (data_.l() > 0 && data_.u.rows() != data_.n()))
    throw DataError("inconsistent data dimensions");
  if (data_.l() > 0 && data_.l() >= data_.n() && data_.n() > 0)
    throw DataError("too many always-included predictors for the sample size");
  if (options_.vbar) {
    vbar_ = *options_.vbar;
    if (spec_.slab.is_student_t()) vbar_ *= spec_.slab.nu / (spec_.slab.nu - 2.0);
  } else {
    vbar_ = vbar_x(data_.x, spec_.slab).value;
  }
  gram_ = ProjectedGram::from(data_);
  design_.resize(data_.n(), data_.l() + data_.k());
  if (data_.l() > 0) design_.leftCols(data_.l()) = data_.u;
  design_.rightCols(data_.k()) = data_.x;
  full_gram_ = design_.transpose() * design_;
  full_xty_ = design_.transpose() * data_.y;
  q_grid_ = midpoint_grid(spec_.grid_q);
  r2_grid_ = midpoint_grid(spec_.grid_r2);
}

void SamplerModel::set_response(const Vector& y) {
  if (y.size() != data_.n()) throw DataError("response length mismatch");
  data_.y = y;
  gram_ = ProjectedGram::from(data_);
  full_xty_ = design_.transpose() * data_.y;
}

double SamplerModel::gamma2(double q, double r2) const { return gamma2_from_r2_q(r2, q, k(), vbar_); }

ChainState initial_state(const SamplerModel& model) {
  ChainState s;
  const Index k = model.k();
  s.z = Eigen::VectorXi::Zero(k);
  s.beta = Vector::Zero(k);
  s.phi = Vector::Zero(model.l());
  s.sigma2 = 1.0;
  s.q = model.q_grid()[(model.q_grid().size() - 1) / 2];
  s.r2 = model.r2_grid()[(model.r2_grid().size() - 1) / 2];
  s.gamma2 = model.gamma2(s.q, s.r2);
  s.lambda2 = Vector::Ones(k);
  return s;
}

void update_z(ChainState& state, const SamplerModel& model, Rng& rng) {
  auto cache = make_cache(state, model);
  scan_inclusion(state, model, rng, cache);
}

void update_sigma2_collapsed(ChainState& state, const SamplerModel& model, Rng& rng) {
  const auto cache = make_cache(state, model);
  draw_sigma2_collapsed(state, model, rng, cache.ssr());
}

void update_beta_phi(ChainState& state, const SamplerModel& model, Rng& rng) {
  const Index l = model.l();
  const Index k = model.k();
  std::vector<Index> cols;
  for (Index j = 0; j < l; ++j) cols.push_back(j);
  for (Index i = 0; i < k; ++i)
    if (state.z[i]) cols.push_back(l + i);
  const Index m = static_cast<Index>(cols.size());

  Matrix precision(m, m);
  Vector rhs(m);
  for (Index r = 0; r < m; ++r) {
    rhs[r] = model.full_xty()[cols[r]];
    for (Index c = 0; c < m; ++c) precision(r, c) = model.full_gram()(cols[r], cols[c]);
    if (cols[r] >= l) precision(r, r) += 1.0 / (state.gamma2 * state.lambda2[cols[r] - l]);
  }
  Eigen::LLT<Matrix> llt(precision);
  if (llt.info() != Eigen::Success)
    throw NumericalError("factorization of the coefficient precision failed",
                         ActiveSet::from_inclusion(state.z, state.lambda2).indices);
  const Vector mean = llt.solve(rhs);
  const Vector noise = draw_normal_vector(rng, m);
  const Vector draw = mean + std::sqrt(state.sigma2) * llt.matrixU().solve(noise);

  state.beta.setZero(k);
  state.phi.resize(l);
  for (Index r = 0; r < m; ++r) {
    if (cols[r] < l)
      state.phi[cols[r]] = draw[r];
    else
      state.beta[cols[r] - l] = draw[r];
  }
}

void update_sigma2(ChainState& state, const SamplerModel& model, Rng& rng) {
  const Dataset& data = model.data();
  Vector resid = data.y - data.x * state.beta;
  if (model.l() > 0) resid -= data.u * state.phi;
  double prior_term = 0.0;
  for (Index i = 0; i < model.k(); ++i)
    if (state.z[i]) prior_term += state.beta[i] * state.beta[i] / (state.gamma2 * state.lambda2[i]);
  const auto s = static_cast<double>(state.active_count());
  const SigmaPrior& prior = model.options().sigma_prior;
  const double shape =
      prior.shape + 0.5 * (model.options().sigma2_shape_factor * static_cast<double>(model.n()) + s);
  const double rate = prior.rate + 0.5 * (resid.squaredNorm() + prior_term);
  if (!(shape > 0.0) || !(rate > 0.0))
    throw NumericalError("improper sigma2 conditional", ActiveSet::from_inclusion(state.z, state.lambda2).indices);
  state.sigma2 = draw_inverse_gamma(rng, shape, rate);
}

void update_lambda2(ChainState& state, double nu, Rng& rng) {
  if (!(nu > 2.0)) throw DomainError("update_lambda2 needs nu > 2");
  const double scale = state.sigma2 * state.gamma2;
  for (Index i = 0; i < state.lambda2.size(); ++i) {
    if (state.z[i])
      state.lambda2[i] = draw_inverse_gamma(rng, 0.5 * (nu + 1.0), 0.5 * (nu + state.beta[i] * state.beta[i] / scale));
    else
      state.lambda2[i] = draw_inverse_gamma(rng, 0.5 * nu, 0.5 * nu);
  }
}

void update_q_r2(ChainState& state, const SamplerModel& model, Rng& rng) {
  const auto& qs = model.q_grid();
  const auto& rs = model.r2_grid();
  const Index k = model.k();
  const auto s = static_cast<double>(state.active_count());
  double scaled_ss = 0.0;  // sum beta_i^2 / lambda_i^2 over active i
  for (Index i = 0; i < k; ++i)
    if (state.z[i]) scaled_ss += state.beta[i] * state.beta[i] / state.lambda2[i];
  const double kv = static_cast<double>(k) * model.vbar();

  std::vector<double> log_odds_r2(rs.size());
  for (std::size_t j = 0; j < rs.size(); ++j) log_odds_r2[j] = std::log(rs[j] / (1.0 - rs[j]));

  std::vector<double> logw(qs.size() * rs.size());
  double max_logw = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < qs.size(); ++a) {
    const double q = qs[a];
    const double log_qkv = std::log(q * kv);
    const double base = s * std::log(q) + (static_cast<double>(k) - s) * std::log1p(-q);
    for (std::size_t b = 0; b < rs.size(); ++b) {
      // gamma^2 = odds(R^2) / (q k vbar)
      const double log_gamma2 = log_odds_r2[b] - log_qkv;
      const double inv_gamma2 = std::exp(-log_gamma2);
      const double w = base - 0.5 * s * log_gamma2 - 0.5 * scaled_ss * inv_gamma2 / state.sigma2;
      logw[a * rs.size() + b] = w;
      max_logw = std::max(max_logw, w);
    }
  }
  double total = 0.0;
  for (double& w : logw) {
    w = std::exp(w - max_logw);
    total += w;
  }
  if (!(total >= 1.0) || !std::isfinite(total)) throw std::logic_error("update_q_r2: degenerate grid weights");

  const double u = draw_uniform(rng) * total;
  double acc = 0.0;
  std::size_t cell = logw.size() - 1;
  for (std::size_t c = 0; c < logw.size(); ++c) {
    acc += logw[c];
    if (u < acc) {
      cell = c;
      break;
    }
  }
  state.q = qs[cell / rs.size()];
  state.r2 = rs[cell % rs.size()];
  state.gamma2 = model.gamma2(state.q, state.r2);
}

void sweep(ChainState& state, const SamplerModel& model, Rng& rng) {
  auto cache = make_cache(state, model);
  scan_inclusion(state, model, rng, cache);
  if (model.options().collapsed_sigma2) draw_sigma2_collapsed(state, model, rng, cache.ssr());
  update_beta_phi(state, model, rng);
  update_sigma2(state, model, rng);
  if (model.spec().slab.is_student_t()) update_lambda2(state, model.spec().slab.nu, rng);
  update_q_r2(state, model, rng);
}

void check_invariants(const ChainState& state, const SamplerModel& model) {
  const Index k = model.k();
  if (state.z.size() != k || state.beta.size() != k || state.lambda2.size() != k)
    throw std::logic_error("state dimensions do not match k");
  for (Index i = 0; i < k; ++i) {
    if (state.z[i] != 0 && state.z[i] != 1) throw std::logic_error("z is not binary");
    if ((state.beta[i] == 0.0) != (state.z[i] == 0)) throw std::logic_error("beta_i = 0 must coincide with z_i = 0");
    if (!(state.lambda2[i] > 0.0)) throw std::logic_error("lambda2 must be positive");
    if (!model.spec().slab.is_student_t() && state.lambda2[i] != 1.0)
      throw std::logic_error("Gaussian slab requires lambda2 == 1");
  }
  if (!(state.sigma2 > 0.0)) throw std::logic_error("sigma2 must be positive");
  if (!(state.q > 0.0 && state.q < 1.0) || !(state.r2 > 0.0 && state.r2 < 1.0))
    throw std::logic_error("q and r2 must lie in (0, 1)");
  const double implied = model.gamma2(state.q, state.r2);
  if (std::abs(state.gamma2 - implied) > 1e-12 * implied)
    throw std::logic_error("gamma2 is inconsistent with (q, r2)");
}

void TraceStore::append(long iter, ChainState state) {
  if (state.z.size() != k_) throw std::invalid_argument("TraceStore: dimension mismatch");
  draws_.push_back({iter, std::move(state)});
}

bool operator==(const ChainState& a, const ChainState& b) {
  return a.z == b.z && a.beta == b.beta && a.phi == b.phi && a.sigma2 == b.sigma2 && a.q == b.q && a.r2 == b.r2 &&
         a.gamma2 == b.gamma2 && a.lambda2 == b.lambda2;
}

bool operator==(const TraceStore& a, const TraceStore& b) {
  if (a.k_ != b.k_ || a.draws_.size() != b.draws_.size()) return false;
  for (std::size_t d = 0; d < a.draws_.size(); ++d)
    if (a.draws_[d].iter != b.draws_[d].iter || !(a.draws_[d].state == b.draws_[d].state)) return false;
  return true;
}

TraceStore run_chain(const Dataset& data, const SlabSpec& spec, const SamplerOptions& options) {
  const SamplerModel model(data, spec, options);
  ChainState state = initial_state(model);
  Rng rng(spec.seed);
  TraceStore trace(model.k());
  for (long iter = 1; iter <= spec.n_iter; ++iter) {
    try {
      sweep(state, model, rng);
    } catch (const NumericalError& e) {
      throw e.at_sweep(iter);
    }
    if (iter > spec.n_burn && (iter - spec.n_burn) % spec.thin == 0) {
#ifndef NDEBUG
      check_invariants(state, model);
#endif
      trace.append(iter, state);
    }
  }
  return trace;
}

std::vector<TraceStore> run_chains(const Dataset& data, const SlabSpec& spec, int n_chains, int max_parallel,
                                   const SamplerOptions& options) {
  if (n_chains < 1) throw DomainError("need at least one chain");
  std::vector<TraceStore> traces(static_cast<std::size_t>(n_chains));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_chains));
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int c = next++; c < n_chains; c = next++) {
      SlabSpec chain_spec = spec;
      chain_spec.seed = spec.seed + static_cast<std::uint64_t>(c);
      try {
        traces[static_cast<std::size_t>(c)] = run_chain(data, chain_spec, options);
      } catch (...) {
        errors[static_cast<std::size_t>(c)] = std::current_exception();
      }
    }
  };
  const int workers = std::clamp(max_parallel, 1, n_chains);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return traces;
}

}  // namespace slabspike
