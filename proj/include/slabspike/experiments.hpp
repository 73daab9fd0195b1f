#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "slabspike/dataset.hpp"
#include "slabspike/gibbs.hpp"
#include "slabspike/prior.hpp"

namespace slabspike {

/// Sparse simulation design: n = 68 draws of k = 16 standard-normal
/// predictors, three of them with nonzero effects, noise sd 0.75 s.
struct SimScenario {
  int s = 1;
  Index n = 68;
  Index k = 16;
  std::vector<double> beta_true{-0.86, 0.64, 0.89};
  std::uint64_t seed = 0;

  double sigma_eps() const { return 0.75 * s; }
  /// Throws DomainError unless s in 1..6, n >= 2 and k >= beta_true.size().
  void validate() const;
};

/// Draws X and eps* once per seed (shared by every s), forms
/// y = X b + sigma_eps eps*, and standardizes y and X.  U is empty.
Dataset simulate_dataset(const SimScenario& scenario);

/// Appends `count` standardized N(0, 1) columns labelled rnd:1, rnd:2, ...
/// Existing columns are copied bit-for-bit.  count == 0 is the identity.
Dataset inject_random(const Dataset& data, Index count, std::uint64_t seed);

std::vector<double> default_nu_grid();

/// Sweep row key: nu for Student-t rows, +inf for the Gaussian row.
struct SweepRun {
  Slab slab;
  std::vector<TraceStore> chains;
  std::optional<std::string> error;  // set when this row's chain failed

  double key() const { return slab.is_student_t() ? slab.nu : std::numeric_limits<double>::infinity(); }
};

/// One independent run per nu (plus a Gaussian run when requested), ordered by
/// ascending nu with the Gaussian row last.  Row r uses seed
/// derive_seed(spec.seed, r); a failing row records its error and the rest
/// still run.
std::vector<SweepRun> nu_sweep(const Dataset& data, const SlabSpec& spec, const std::vector<double>& nus,
                               bool include_gaussian = true, int n_chains = 1, int max_parallel = 1);

/// Inclusion probabilities before and after injecting random predictors,
/// replicated over injection seeds.
struct InjectionReplicate {
  std::uint64_t seed = 0;
  Vector inc_original;  // first k entries after injection
  Vector inc_injected;
};

struct InjectionStudy {
  Vector inc_baseline;  // without injection
  std::vector<InjectionReplicate> replicates;

  /// Median over replicates and injected columns.
  double median_injected_inc() const;
  /// Largest |inc_after - inc_before| over replicates and original predictors.
  double max_original_shift() const;
};

InjectionStudy injection_study(const Dataset& data, const SlabSpec& spec, Index count,
                               const std::vector<std::uint64_t>& seeds, int max_parallel = 1);

}  // namespace slabspike
