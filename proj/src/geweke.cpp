#include "slabspike/geweke.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "slabspike/errors.hpp"
#include "slabspike/random.hpp"

namespace slabspike {
namespace {

constexpr std::array<const char*, 4> kTracked{"q", "r2", "sigma2", "s"};

std::array<double, 4> tracked(const ChainState& s) {
  return {s.q, s.r2, s.sigma2, static_cast<double>(s.active_count())};
}

// Draw of every parameter from the (grid-discretized) prior.  phi has a flat
// prior and no proper draw; it is set to standard normal values, which does
// not affect any tracked quantity.
ChainState draw_from_prior(const SamplerModel& model, Rng& rng) {
  const auto& qs = model.q_grid();
  const auto& rs = model.r2_grid();
  const Index k = model.k();
  const Slab& slab = model.spec().slab;
  const SigmaPrior& sp = model.options().sigma_prior;

  ChainState s;
  s.q = qs[std::min(qs.size() - 1, static_cast<std::size_t>(draw_uniform(rng) * static_cast<double>(qs.size())))];
  s.r2 = rs[std::min(rs.size() - 1, static_cast<std::size_t>(draw_uniform(rng) * static_cast<double>(rs.size())))];
  s.gamma2 = model.gamma2(s.q, s.r2);
  s.sigma2 = draw_inverse_gamma(rng, sp.shape, sp.rate);
  s.z.resize(k);
  s.beta = Vector::Zero(k);
  s.lambda2 = Vector::Ones(k);
  for (Index i = 0; i < k; ++i) {
    s.z[i] = draw_bernoulli(rng, s.q) ? 1 : 0;
    if (slab.is_student_t()) s.lambda2[i] = draw_inverse_gamma(rng, 0.5 * slab.nu, 0.5 * slab.nu);
    if (s.z[i]) s.beta[i] = std::sqrt(s.sigma2 * s.gamma2 * s.lambda2[i]) * draw_normal(rng);
  }
  s.phi = draw_normal_vector(rng, model.l());
  return s;
}

Vector simulate_response(const SamplerModel& model, const ChainState& s, Rng& rng) {
  const Dataset& d = model.data();
  Vector y = d.x * s.beta + std::sqrt(s.sigma2) * draw_normal_vector(rng, d.n());
  if (model.l() > 0) y += d.u * s.phi;
  return y;
}

struct MeanEstimate {
  double mean = 0.0;
  double se = 0.0;
};

MeanEstimate iid_mean(const std::vector<double>& v) {
  const auto n = static_cast<double>(v.size());
  double m = 0.0;
  for (double x : v) m += x;
  m /= n;
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return {m, std::sqrt(ss / (n - 1.0) / n)};
}

MeanEstimate batch_mean(const std::vector<double>& v, Index batches) {
  const Index n = static_cast<Index>(v.size());
  batches = std::clamp<Index>(batches, 2, n);
  const Index size = n / batches;
  std::vector<double> means;
  for (Index b = 0; b < batches; ++b) {
    double m = 0.0;
    for (Index i = b * size; i < (b + 1) * size; ++i) m += v[static_cast<std::size_t>(i)];
    means.push_back(m / static_cast<double>(size));
  }
  const MeanEstimate over_batches = iid_mean(means);
  double total = 0.0;
  for (double x : v) total += x;
  return {total / static_cast<double>(n), over_batches.se};
}

void require_proper(const GewekeOptions& options) {
  const SigmaPrior& p = options.sampler.sigma_prior;
  if (!(p.shape > 0.0 && p.rate > 0.0)) throw DomainError("prior simulation needs a proper sigma2 prior");
}

}  // namespace

bool GewekeReport::passed() const { return max_abs_z() < threshold; }

double GewekeReport::max_abs_z() const {
  double m = 0.0;
  for (const auto& c : moments) m = std::max(m, std::abs(c.z));
  return m;
}

GewekeReport geweke_joint_test(DataShape shape, const SlabSpec& spec, Index n_draws, const GewekeOptions& options) {
  require_proper(options);
  if (shape.n < 2 || shape.k < 1 || shape.l < 0 || shape.l >= shape.n) throw DomainError("invalid data shape");
  if (n_draws < 4) throw DomainError("need at least 4 draws");

  Rng design_rng(derive_seed(spec.seed, 0));
  Dataset data;
  data.x = Matrix(shape.n, shape.k);
  for (Index c = 0; c < shape.k; ++c) data.x.col(c) = draw_normal_vector(design_rng, shape.n);
  data.u = Matrix(shape.n, shape.l);
  for (Index c = 0; c < shape.l; ++c) data.u.col(c) = draw_normal_vector(design_rng, shape.n);
  data.y = Vector::Zero(shape.n);
  data.names = default_names(shape.k);
  SamplerModel model(data, spec, options.sampler);

  std::array<std::vector<double>, 4> prior_draws, chain_draws;
  Rng prior_rng(derive_seed(spec.seed, 1));
  for (Index d = 0; d < n_draws; ++d) {
    const auto g = tracked(draw_from_prior(model, prior_rng));
    for (std::size_t j = 0; j < g.size(); ++j) prior_draws[j].push_back(g[j]);
  }

  Rng chain_rng(derive_seed(spec.seed, 2));
  ChainState state = draw_from_prior(model, chain_rng);
  model.set_response(simulate_response(model, state, chain_rng));
  for (Index d = 0; d < n_draws; ++d) {
    sweep(state, model, chain_rng);
    const auto g = tracked(state);
    for (std::size_t j = 0; j < g.size(); ++j) chain_draws[j].push_back(g[j]);
    model.set_response(simulate_response(model, state, chain_rng));
  }

  GewekeReport report;
  report.threshold = options.threshold;
  for (std::size_t j = 0; j < kTracked.size(); ++j) {
    const auto a = iid_mean(prior_draws[j]);
    const auto b = batch_mean(chain_draws[j], options.batches);
    MomentComparison c{kTracked[j], a.mean, a.se, b.mean, b.se, 0.0};
    c.z = (a.mean - b.mean) / std::sqrt(a.se * a.se + b.se * b.se);
    report.moments.push_back(c);
  }
  return report;
}

MomentComparison prior_only_q(Index k, const SlabSpec& spec, Index n_draws, const GewekeOptions& options) {
  require_proper(options);
  Dataset empty;
  empty.x = Matrix(0, k);
  empty.y = Vector(0);
  empty.names = default_names(k);
  SamplerOptions sampler = options.sampler;
  if (!sampler.vbar) sampler.vbar = 1.0;
  const SamplerModel model(empty, spec, sampler);

  Rng rng(spec.seed);
  ChainState state = initial_state(model);
  std::vector<double> qs;
  for (Index d = 0; d < n_draws; ++d) {
    sweep(state, model, rng);
    qs.push_back(state.q);
  }
  double grid_mean = 0.0;
  for (double q : model.q_grid()) grid_mean += q;
  grid_mean /= static_cast<double>(model.q_grid().size());

  const auto est = batch_mean(qs, options.batches);
  MomentComparison c{"q", grid_mean, 0.0, est.mean, est.se, 0.0};
  c.z = (est.mean - grid_mean) / est.se;
  return c;
}

}  // namespace slabspike
