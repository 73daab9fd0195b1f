#include "slabspike/reporting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace slabspike {
namespace {

double quantile_sorted(const std::vector<double>& v, double p) {
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

// Rule-of-thumb bandwidth 0.9 min(sd, IQR/1.34) n^{-1/5}, with the usual
// fallbacks for degenerate samples.
double silverman_bandwidth(const std::vector<double>& sorted) {
  const auto n = static_cast<double>(sorted.size());
  double mean = 0.0;
  for (double v : sorted) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : sorted) ss += (v - mean) * (v - mean);
  const double sd = n > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  double lo = std::min(sd, iqr / 1.34);
  if (!(lo > 0.0)) lo = sd > 0.0 ? sd : (sorted.front() != 0.0 ? std::abs(sorted.front()) : 1.0);
  return 0.9 * lo * std::pow(n, -0.2);
}

void normalize(DensityEstimate& d) {
  const double mass = trapezoid_mass(d);
  if (mass > 0.0)
    for (double& v : d.density) v /= mass;
}

}  // namespace

double trapezoid_mass(const DensityEstimate& d) {
  double mass = 0.0;
  for (std::size_t i = 1; i < d.x.size(); ++i) mass += 0.5 * (d.density[i] + d.density[i - 1]) * (d.x[i] - d.x[i - 1]);
  return mass;
}

DensityEstimate density_estimate(std::span<const double> draws, Index grid_size) {
  DensityEstimate out;
  if (draws.empty()) return out;
  std::vector<double> sorted(draws.begin(), draws.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<Index>(sorted.size());

  if (n < kKernelMinDraws) {
    out.kind = DensityEstimate::Kind::Histogram;
    double lo = sorted.front();
    double hi = sorted.back();
    if (hi == lo) {
      const double half = 0.5e-3 * std::max(1.0, std::abs(lo));
      lo -= half;
      hi += half;
    }
    const double width = (hi - lo) / static_cast<double>(kHistogramBins);
    std::vector<Index> counts(static_cast<std::size_t>(kHistogramBins), 0);
    for (double v : sorted) {
      auto b = static_cast<Index>((v - lo) / width);
      counts[static_cast<std::size_t>(std::clamp<Index>(b, 0, kHistogramBins - 1))]++;
    }
    out.bandwidth = width;
    for (Index b = 0; b < kHistogramBins; ++b) {
      const double h = static_cast<double>(counts[static_cast<std::size_t>(b)]) / (static_cast<double>(n) * width);
      out.x.push_back(lo + static_cast<double>(b) * width);
      out.x.push_back(lo + static_cast<double>(b + 1) * width);
      out.density.push_back(h);
      out.density.push_back(h);
    }
    return out;
  }

  out.kind = DensityEstimate::Kind::Kernel;
  const double h = silverman_bandwidth(sorted);
  out.bandwidth = h;
  const double lo = sorted.front() - 3.0 * h;
  const double hi = sorted.back() + 3.0 * h;
  const double step = (hi - lo) / static_cast<double>(grid_size - 1);
  const double norm = 1.0 / (static_cast<double>(n) * h * std::sqrt(2.0 * std::numbers::pi));
  out.x.resize(static_cast<std::size_t>(grid_size));
  out.density.assign(static_cast<std::size_t>(grid_size), 0.0);
  for (Index g = 0; g < grid_size; ++g) out.x[static_cast<std::size_t>(g)] = lo + static_cast<double>(g) * step;

  // Kernel contributions beyond 8 bandwidths are below double resolution.
  const double reach = 8.0 * h;
  for (double v : sorted) {
    const auto first = static_cast<Index>(std::max(0.0, std::ceil((v - reach - lo) / step)));
    const auto last = std::min<Index>(grid_size - 1, static_cast<Index>(std::floor((v + reach - lo) / step)));
    for (Index g = first; g <= last; ++g) {
      const double t = (out.x[static_cast<std::size_t>(g)] - v) / h;
      out.density[static_cast<std::size_t>(g)] += std::exp(-0.5 * t * t);
    }
  }
  for (double& d : out.density) d *= norm;
  normalize(out);
  return out;
}

std::array<Index, 3> cutoff_counts(const Vector& inc) {
  std::array<Index, 3> counts{};
  for (std::size_t c = 0; c < kInclusionCutoffs.size(); ++c)
    counts[c] = (inc.array() > kInclusionCutoffs[c]).count();
  return counts;
}

PosteriorSummary summarize(std::span<const TraceStore> chains, std::vector<std::string> names, Index grid_size) {
  if (chains.empty()) throw std::invalid_argument("summarize: no chains");
  const Index k = chains.front().k();
  Index total = 0;
  for (const auto& c : chains) {
    if (c.k() != k) throw std::invalid_argument("summarize: chains disagree on k");
    total += c.size();
  }
  if (total == 0) throw std::invalid_argument("summarize: empty trace");
  if (names.empty()) {
    for (Index j = 0; j < k; ++j) names.push_back("x" + std::to_string(j + 1));
  }
  if (static_cast<Index>(names.size()) != k) throw std::invalid_argument("summarize: label count does not match k");

  PosteriorSummary out;
  out.names = std::move(names);
  out.draws = total;
  out.inc = Vector::Zero(k);
  std::vector<std::vector<double>> included(static_cast<std::size_t>(k));
  for (const auto& c : chains) {
    for (const auto& d : c.draws()) {
      for (Index j = 0; j < k; ++j) {
        if (d.state.z[j]) {
          out.inc[j] += 1.0;
          included[static_cast<std::size_t>(j)].push_back(d.state.beta[j]);
        }
      }
    }
  }
  out.inc /= static_cast<double>(total);
  for (Index j = 0; j < k; ++j) {
    const auto& b = included[static_cast<std::size_t>(j)];
    if (b.empty()) {
      out.g0.emplace_back(std::nullopt);
    } else {
      const auto positive = std::count_if(b.begin(), b.end(), [](double v) { return v > 0.0; });
      out.g0.emplace_back(static_cast<double>(positive) / static_cast<double>(b.size()));
    }
    out.density.push_back(density_estimate(b, grid_size));
  }
  out.cutoffs = cutoff_counts(out.inc);
  return out;
}

PosteriorSummary summarize(const TraceStore& trace, std::vector<std::string> names, Index grid_size) {
  return summarize(std::span<const TraceStore>(&trace, 1), std::move(names), grid_size);
}

Heatmap heatmap_matrix(std::vector<HeatmapEntry> rows, std::vector<std::string> column_labels) {
  if (rows.empty()) throw std::invalid_argument("heatmap_matrix: no rows");
  const Index k = rows.front().inc.size();
  for (const auto& r : rows)
    if (r.inc.size() != k) throw std::invalid_argument("heatmap_matrix: rows disagree on k");
  if (column_labels.empty())
    for (Index j = 0; j < k; ++j) column_labels.push_back("x" + std::to_string(j + 1));
  if (static_cast<Index>(column_labels.size()) != k)
    throw std::invalid_argument("heatmap_matrix: column label count does not match k");

  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
  Heatmap h;
  h.column_labels = std::move(column_labels);
  h.values.resize(static_cast<Index>(rows.size()), k);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    h.row_labels.push_back(rows[r].label);
    h.values.row(static_cast<Index>(r)) = rows[r].inc.transpose();
    h.cutoffs.push_back(cutoff_counts(rows[r].inc));
  }
  return h;
}

}  // namespace slabspike
