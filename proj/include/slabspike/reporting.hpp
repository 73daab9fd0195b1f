#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slabspike/gibbs.hpp"
#include "slabspike/types.hpp"

namespace slabspike {

inline constexpr std::array<double, 3> kInclusionCutoffs{0.5, 0.75, 0.9};

/// Estimated density of the included draws of one coefficient.  Kernel mode
/// is a Gaussian KDE on a uniform grid; histogram mode stores each bin as two
/// points (left edge, right edge) with the bin height, so the trapezoid rule
/// integrates it exactly.
struct DensityEstimate {
  enum class Kind { Kernel, Histogram, Missing };
  Kind kind = Kind::Missing;
  std::vector<double> x;
  std::vector<double> density;
  double bandwidth = 0.0;  // kernel bandwidth or histogram bin width

  Index bins() const { return kind == Kind::Histogram ? static_cast<Index>(x.size() / 2) : 0; }
};

inline constexpr Index kKernelMinDraws = 50;
inline constexpr Index kHistogramBins = 10;

/// Gaussian KDE (Silverman bandwidth, 0.9 min(sd, IQR/1.34) n^{-1/5}) on
/// `grid_size` points spanning the draw range +- 3 bandwidths, normalized to
/// unit trapezoid mass.  Fewer than 50 draws fall back to a 10-bin histogram;
/// no draws give Kind::Missing.
DensityEstimate density_estimate(std::span<const double> draws, Index grid_size = 512);

/// Trapezoid-rule integral of a density grid.
double trapezoid_mass(const DensityEstimate& density);

struct PosteriorSummary {
  std::vector<std::string> names;
  Vector inc;                             // P(z_i = 1)
  std::vector<std::optional<double>> g0;  // P(beta_i > 0 | z_i = 1), missing if never included
  std::vector<DensityEstimate> density;
  std::array<Index, 3> cutoffs{};  // #inc above 0.5, 0.75, 0.9
  Index draws = 0;
};

/// Pools the draws of all chains.  Throws std::invalid_argument on an empty
/// trace or mismatched k.
PosteriorSummary summarize(std::span<const TraceStore> chains, std::vector<std::string> names = {},
                           Index grid_size = 512);
PosteriorSummary summarize(const TraceStore& trace, std::vector<std::string> names = {},
                           Index grid_size = 512);

std::array<Index, 3> cutoff_counts(const Vector& inc);

/// One heatmap row: a label and an ordering key (nu, +inf for Gaussian).
struct HeatmapEntry {
  std::string label;
  double key = 0.0;
  Vector inc;
};

/// Rows are models, columns predictors.
struct Heatmap {
  std::vector<std::string> row_labels;
  std::vector<std::string> column_labels;
  Matrix values;
  std::vector<std::array<Index, 3>> cutoffs;
};

/// Sorts rows by ascending key (so Gaussian rows come last) and stacks the
/// inclusion vectors.  Throws std::invalid_argument when rows disagree on k.
Heatmap heatmap_matrix(std::vector<HeatmapEntry> rows, std::vector<std::string> column_labels = {});

}  // namespace slabspike
