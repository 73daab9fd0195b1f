#include "slabspike/io.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "slabspike/csv.hpp"
#include "slabspike/errors.hpp"

namespace slabspike {

void write_trace_csv(std::ostream& out, const TraceStore& trace) {
  const Index k = trace.k();
  out << "iter,sigma2,q,r2,gamma2";
  for (Index j = 1; j <= k; ++j) out << ",z_" << j;
  for (Index j = 1; j <= k; ++j) out << ",beta_" << j;
  out << '\n';
  for (const auto& d : trace.draws()) {
    const auto& s = d.state;
    out << d.iter << ',' << format_double(s.sigma2) << ',' << format_double(s.q) << ',' << format_double(s.r2) << ','
        << format_double(s.gamma2);
    for (Index j = 0; j < k; ++j) out << ',' << s.z[j];
    for (Index j = 0; j < k; ++j) out << ',' << format_double(s.beta[j]);
    out << '\n';
  }
}

TraceStore read_trace_csv(std::istream& in) {
  const CsvTable t = read_csv(in);
  const auto width = static_cast<Index>(t.header.size());
  if (width < 7 || (width - 5) % 2 != 0 || t.header[0] != "iter" || t.header[1] != "sigma2")
    throw DataError("not a trace file: unexpected header");
  const Index k = (width - 5) / 2;
  for (Index j = 0; j < k; ++j) {
    if (t.header[static_cast<std::size_t>(5 + j)] != "z_" + std::to_string(j + 1) ||
        t.header[static_cast<std::size_t>(5 + k + j)] != "beta_" + std::to_string(j + 1))
      throw DataError("not a trace file: unexpected column names");
  }
  TraceStore trace(k);
  for (Index r = 0; r < t.values.rows(); ++r) {
    const auto row = t.values.row(r);
    ChainState s;
    s.sigma2 = row[1];
    s.q = row[2];
    s.r2 = row[3];
    s.gamma2 = row[4];
    s.z.resize(k);
    s.beta.resize(k);
    for (Index j = 0; j < k; ++j) {
      const double z = row[5 + j];
      if (z != 0.0 && z != 1.0) throw DataError("inclusion indicator is not 0/1", static_cast<std::size_t>(r + 2));
      s.z[j] = static_cast<int>(z);
      s.beta[j] = row[5 + k + j];
    }
    trace.append(static_cast<long>(row[0]), std::move(s));
  }
  if (trace.empty()) throw DataError("trace file has no draws");
  return trace;
}

namespace {

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

}  // namespace

void write_summary_json(std::ostream& out, const PosteriorSummary& summary) {
  out << "{\n  \"draws\": " << summary.draws << ",\n  \"cutoffs\": {";
  for (std::size_t c = 0; c < kInclusionCutoffs.size(); ++c)
    out << (c ? ", " : "") << '"' << kInclusionCutoffs[c] << "\": " << summary.cutoffs[c];
  out << "},\n  \"predictors\": [\n";
  for (std::size_t j = 0; j < summary.names.size(); ++j) {
    out << "    {\"name\": " << json_string(summary.names[j])
        << ", \"inc\": " << format_double(summary.inc[static_cast<Index>(j)]) << ", \"g0\": ";
    if (summary.g0[j])
      out << format_double(*summary.g0[j]);
    else
      out << "null";
    out << '}' << (j + 1 < summary.names.size() ? "," : "") << '\n';
  }
  out << "  ]\n}\n";
}

void write_inclusion_csv(std::ostream& out, const Heatmap& heatmap) {
  out << "model";
  for (const auto& c : heatmap.column_labels) out << ',' << c;
  out << ",above_0.5,above_0.75,above_0.9\n";
  for (Index r = 0; r < heatmap.values.rows(); ++r) {
    out << heatmap.row_labels[static_cast<std::size_t>(r)];
    for (Index j = 0; j < heatmap.values.cols(); ++j) out << ',' << format_double(heatmap.values(r, j));
    for (Index c : heatmap.cutoffs[static_cast<std::size_t>(r)]) out << ',' << c;
    out << '\n';
  }
}

void write_density_csv(std::ostream& out, const DensityEstimate& density) {
  out << "beta,density\n";
  for (std::size_t i = 0; i < density.x.size(); ++i)
    out << format_double(density.x[i]) << ',' << format_double(density.density[i]) << '\n';
}

std::string file_safe(const std::string& name) {
  std::string out;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
                    c == '-' || c == '.';
    out += ok ? c : '_';
  }
  return out.empty() ? "_" : out;
}

std::string file_digest(const std::filesystem::path& path) {
  const std::string bytes = read_text_file(path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace slabspike
