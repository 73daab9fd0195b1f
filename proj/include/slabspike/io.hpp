#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "slabspike/gibbs.hpp"
#include "slabspike/reporting.hpp"

namespace slabspike {

/// Trace CSV: iter, sigma2, q, r2, gamma2, z_1..z_k, beta_1..beta_k.
void write_trace_csv(std::ostream& out, const TraceStore& trace);
/// Reads a trace back.  phi and lambda^2 are not exported and come back empty.
/// Throws DataError on malformed content.
TraceStore read_trace_csv(std::istream& in);

void write_summary_json(std::ostream& out, const PosteriorSummary& summary);
/// Heatmap matrix plus the cutoff counts as trailing columns.
void write_inclusion_csv(std::ostream& out, const Heatmap& heatmap);
void write_density_csv(std::ostream& out, const DensityEstimate& density);

/// Predictor label made safe for a file name.
std::string file_safe(const std::string& name);

/// 64-bit FNV-1a of a file's bytes, as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& contents);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace slabspike
