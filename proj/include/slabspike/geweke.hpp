#pragma once

#include <string>
#include <vector>

#include "slabspike/gibbs.hpp"

namespace slabspike {

struct DataShape {
  Index n = 20;
  Index k = 4;
  Index l = 0;
};

struct GewekeOptions {
  /// A proper sigma^2 prior is required to simulate from the prior.
  SamplerOptions sampler{SigmaPrior{4.0, 3.0}, true, 1.0, std::nullopt};
  double threshold = 4.0;
  Index batches = 200;
};

struct MomentComparison {
  std::string name;
  double prior_mean = 0.0;  // marginal-conditional simulation
  double prior_se = 0.0;
  double chain_mean = 0.0;  // successive-conditional simulation
  double chain_se = 0.0;    // batch-means standard error
  double z = 0.0;           // standardized difference
};

struct GewekeReport {
  std::vector<MomentComparison> moments;
  double threshold = 4.0;

  bool passed() const;
  double max_abs_z() const;
};

/// Joint-distribution test of the sampler.  Compares E[q], E[R^2],
/// E[sigma^2] and E[s] under (a) independent prior draws and (b) a chain
/// that alternates one Gibbs sweep with regenerating y | parameters.
/// X and U are fixed standard-normal designs drawn from spec.seed.
GewekeReport geweke_joint_test(DataShape shape, const SlabSpec& spec, Index n_draws,
                               const GewekeOptions& options = {});

/// Runs the sampler on a design with zero rows, so every update reduces to its
/// prior.  Returns the mean of q and its batch-means standard error.
MomentComparison prior_only_q(Index k, const SlabSpec& spec, Index n_draws,
                              const GewekeOptions& options = {});

}  // namespace slabspike
