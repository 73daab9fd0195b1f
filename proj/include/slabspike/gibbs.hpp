#pragma once

#include <optional>
#include <vector>

#include "slabspike/dataset.hpp"
#include "slabspike/marginal.hpp"
#include "slabspike/prior.hpp"
#include "slabspike/types.hpp"

namespace slabspike {

/// One iteration's full parameter state.
struct ChainState {
  Eigen::VectorXi z;  // inclusion indicators
  Vector beta;        // zero where z_i == 0
  Vector phi;         // always-included coefficients
  double sigma2 = 1.0;
  double q = 0.5;
  double r2 = 0.5;
  double gamma2 = 1.0;
  Vector lambda2;  // all ones under the Gaussian slab

  Index active_count() const { return z.sum(); }
};

/// Knobs that are not part of the model.  The defaults give the sampler;
/// the other settings exist for correctness checks.
struct SamplerOptions {
  /// Prior on sigma^2; the default (0, 0) is the improper 1/sigma^2 prior.
  SigmaPrior sigma_prior;
  /// Redraw sigma^2 with beta and phi integrated out between the inclusion
  /// scan and the coefficient draw.
  bool collapsed_sigma2 = true;
  /// Multiplies the data part of the conditional sigma^2 shape.  Anything
  /// other than 1 is a deliberately broken sampler.
  double sigma2_shape_factor = 1.0;
  /// Overrides the data-derived vbar (needed when the design has no rows).
  std::optional<double> vbar;
};

/// Per-chain constants: Gram matrices, vbar and the (q, R^2) grid.
class SamplerModel {
 public:
  SamplerModel(Dataset data, SlabSpec spec, SamplerOptions options = {});

  /// Swaps in a new response, keeping X and U (prior-data simulation).
  void set_response(const Vector& y);

  const Dataset& data() const { return data_; }
  const SlabSpec& spec() const { return spec_; }
  const SamplerOptions& options() const { return options_; }
  const ProjectedGram& gram() const { return gram_; }
  double vbar() const { return vbar_; }
  Index k() const { return data_.k(); }
  Index l() const { return data_.l(); }
  Index n() const { return data_.n(); }

  const std::vector<double>& q_grid() const { return q_grid_; }
  const std::vector<double>& r2_grid() const { return r2_grid_; }
  double gamma2(double q, double r2) const;

  /// [U X]'[U X] and [U X]'y, U block first.
  const Matrix& full_gram() const { return full_gram_; }
  const Vector& full_xty() const { return full_xty_; }

 private:
  Dataset data_;
  SlabSpec spec_;
  SamplerOptions options_;
  ProjectedGram gram_;
  Matrix design_;  // [U X]
  Matrix full_gram_;
  Vector full_xty_;
  double vbar_ = 1.0;
  std::vector<double> q_grid_;
  std::vector<double> r2_grid_;
};

/// z = 0, beta = phi = 0, sigma^2 = 1, (q, R^2) at the grid medians, lambda^2 = 1.
ChainState initial_state(const SamplerModel& model);

/// Systematic ascending scan of collapsed single-site flips: z_i ~ Bernoulli
/// with odds q/(1-q) * BF_i.  Leaves beta stale.
void update_z(ChainState& state, const SamplerModel& model, Rng& rng);

/// sigma^2 | z, q, R^2, lambda^2, y with beta and phi integrated out.
void update_sigma2_collapsed(ChainState& state, const SamplerModel& model, Rng& rng);

/// Joint Gaussian draw of (phi, beta_active); inactive beta set to 0.
void update_beta_phi(ChainState& state, const SamplerModel& model, Rng& rng);

/// sigma^2 ~ IG((n + s)/2, (RSS + sum_active beta_i^2 / (g2 l_i)) / 2).
void update_sigma2(ChainState& state, const SamplerModel& model, Rng& rng);

/// Student-t latent scales.  Active: IG((nu + 1)/2, (nu + beta_i^2/(s2 g2))/2);
/// inactive: refreshed from the prior IG(nu/2, nu/2).
void update_lambda2(ChainState& state, double nu, Rng& rng);

/// Joint draw of (q, R^2) over the midpoint grid, then gamma^2 refresh.
void update_q_r2(ChainState& state, const SamplerModel& model, Rng& rng);

/// One full sweep in the fixed order z, [sigma^2 collapsed], (beta, phi),
/// sigma^2, lambda^2 (Student-t only), (q, R^2).
void sweep(ChainState& state, const SamplerModel& model, Rng& rng);

/// Throws std::logic_error naming the first violated state invariant.
void check_invariants(const ChainState& state, const SamplerModel& model);

struct Draw {
  long iter = 0;
  ChainState state;
};

/// Thinned post-burn-in draws of one chain.  Append-only.
class TraceStore {
 public:
  explicit TraceStore(Index k = 0) : k_(k) {}

  void append(long iter, ChainState state);
  const std::vector<Draw>& draws() const { return draws_; }
  Index size() const { return static_cast<Index>(draws_.size()); }
  bool empty() const { return draws_.empty(); }
  Index k() const { return k_; }

  friend bool operator==(const TraceStore& a, const TraceStore& b);

 private:
  Index k_;
  std::vector<Draw> draws_;
};

bool operator==(const ChainState& a, const ChainState& b);

/// Runs one chain seeded with spec.seed.  Numerical failures are rethrown
/// with the sweep index attached.
TraceStore run_chain(const Dataset& data, const SlabSpec& spec, const SamplerOptions& options = {});

/// Chain c uses seed spec.seed + c; up to `max_parallel` chains run at once.
/// Results are identical for every value of max_parallel.
std::vector<TraceStore> run_chains(const Dataset& data, const SlabSpec& spec, int n_chains,
                                   int max_parallel = 1, const SamplerOptions& options = {});

}  // namespace slabspike
