#include "slabspike/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "slabspike/errors.hpp"
#include "slabspike/random.hpp"
#include "slabspike/reporting.hpp"

namespace slabspike {

void SimScenario::validate() const {
  if (s < 1 || s > 6) throw DomainError("scenario index must be in 1..6");
  if (n < 2) throw DomainError("scenario needs n >= 2");
  if (k < 1 || k < static_cast<Index>(beta_true.size())) throw DomainError("scenario needs k >= number of effects");
}

Dataset simulate_dataset(const SimScenario& scenario) {
  scenario.validate();
  Rng rng(scenario.seed);
  Dataset raw;
  raw.x.resize(scenario.n, scenario.k);
  for (Index j = 0; j < scenario.k; ++j) raw.x.col(j) = draw_normal_vector(rng, scenario.n);
  const Vector eps = draw_normal_vector(rng, scenario.n);

  Vector beta = Vector::Zero(scenario.k);
  for (std::size_t j = 0; j < scenario.beta_true.size(); ++j) beta[static_cast<Index>(j)] = scenario.beta_true[j];
  raw.y = raw.x * beta + scenario.sigma_eps() * eps;
  raw.u = Matrix(scenario.n, 0);
  raw.names = default_names(scenario.k);
  return standardize(raw);
}

Dataset inject_random(const Dataset& data, Index count, std::uint64_t seed) {
  if (count < 0) throw DomainError("injection count must be non-negative");
  if (count == 0) return data;
  Rng rng(seed);
  Dataset out = data;
  const Index k = data.k();
  out.x.conservativeResize(Eigen::NoChange, k + count);
  for (Index c = 0; c < count; ++c) {
    Vector col = draw_normal_vector(rng, data.n());
    const ColumnMoments m = column_moments(col);
    out.x.col(k + c) = (col.array() - m.mean) / m.sd;
    out.names.push_back("rnd:" + std::to_string(c + 1));
    if (out.standardization.applied) out.standardization.x.push_back(m);
  }
  return out;
}

std::vector<double> default_nu_grid() { return {4.0, 10.0, 30.0, 100.0, 500.0}; }

std::vector<SweepRun> nu_sweep(const Dataset& data, const SlabSpec& spec, const std::vector<double>& nus,
                               bool include_gaussian, int n_chains, int max_parallel) {
  std::vector<double> sorted = nus;
  std::sort(sorted.begin(), sorted.end());
  for (double nu : sorted)
    if (!(nu > 2.0)) throw DomainError("every nu must exceed 2");

  std::vector<SweepRun> runs;
  for (double nu : sorted) runs.push_back({Slab::student_t(nu), {}, std::nullopt});
  if (include_gaussian) runs.push_back({Slab::gaussian(), {}, std::nullopt});

  // Rows run concurrently; chains within a row run sequentially.
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t r = next++; r < runs.size(); r = next++) {
      SlabSpec row_spec = spec;
      row_spec.slab = runs[r].slab;
      row_spec.seed = derive_seed(spec.seed, r);
      try {
        runs[r].chains = run_chains(data, row_spec, n_chains, 1);
      } catch (const std::exception& e) {
        runs[r].error = e.what();
      }
    }
  };
  const int workers = std::clamp<int>(max_parallel, 1, static_cast<int>(runs.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return runs;
}

double InjectionStudy::median_injected_inc() const {
  std::vector<double> all;
  for (const auto& r : replicates)
    for (Index j = 0; j < r.inc_injected.size(); ++j) all.push_back(r.inc_injected[j]);
  if (all.empty()) return 0.0;
  std::sort(all.begin(), all.end());
  const std::size_t m = all.size() / 2;
  return all.size() % 2 ? all[m] : 0.5 * (all[m - 1] + all[m]);
}

double InjectionStudy::max_original_shift() const {
  double worst = 0.0;
  for (const auto& r : replicates) worst = std::max(worst, (r.inc_original - inc_baseline).cwiseAbs().maxCoeff());
  return worst;
}

InjectionStudy injection_study(const Dataset& data, const SlabSpec& spec, Index count,
                               const std::vector<std::uint64_t>& seeds, int max_parallel) {
  InjectionStudy study;
  study.inc_baseline = summarize(run_chain(data, spec)).inc;
  study.replicates.resize(seeds.size());

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(seeds.size());
  const auto worker = [&] {
    for (std::size_t r = next++; r < seeds.size(); r = next++) {
      try {
        const Dataset injected = inject_random(data, count, seeds[r]);
        const Vector inc = summarize(run_chain(injected, spec)).inc;
        study.replicates[r] = {seeds[r], inc.head(data.k()), inc.tail(count)};
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  const int workers = std::clamp<int>(max_parallel, 1, std::max<int>(1, static_cast<int>(seeds.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return study;
}

}  // namespace slabspike
