#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "slabspike/baselines.hpp"
#include "slabspike/csv.hpp"
#include "slabspike/errors.hpp"
#include "slabspike/experiments.hpp"
#include "slabspike/geweke.hpp"
#include "slabspike/io.hpp"
#include "slabspike/reporting.hpp"

namespace fs = std::filesystem;
using namespace slabspike;
using nlohmann::ordered_json;

namespace {

constexpr int kExitDataError = 2;
constexpr int kExitNumericalError = 3;

struct DataOptions {
  std::string input;
  std::string response = "y";
  std::vector<std::string> always_include;
};

struct SamplerFlags {
  std::string family = "gaussian";
  double nu = 4.0;
  long iters = 22000;
  long burn = 2000;
  long thin = 10;
  int grid_q = 100;
  int grid_r2 = 100;
  std::uint64_t seed = 0;
  int chains = 1;
  int jobs = 0;

  SlabSpec spec() const {
    SlabSpec s;
    if (family == "t")
      s.slab = Slab::student_t(nu);
    else if (family == "gaussian")
      s.slab = Slab::gaussian();
    else
      throw DomainError("unknown family '" + family + "'");
    s.n_iter = iters;
    s.n_burn = burn;
    s.thin = thin;
    s.grid_q = grid_q;
    s.grid_r2 = grid_r2;
    s.seed = seed;
    s.validate();
    if (chains < 1) throw DomainError("--chains must be at least 1");
    return s;
  }

  int parallel() const {
    if (jobs > 0) return jobs;
    return std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, chains);
  }
};

void add_data_flags(CLI::App* app, DataOptions& d) {
  app->add_option("--input", d.input, "CSV file with a header row")->required()->check(CLI::ExistingFile);
  app->add_option("--response", d.response, "response column")->capture_default_str();
  app->add_option("--always-include", d.always_include, "columns kept in every model")->delimiter(',');
}

void add_sampler_flags(CLI::App* app, SamplerFlags& f) {
  app->add_option("--family", f.family, "slab family")->check(CLI::IsMember({"gaussian", "t"}))->capture_default_str();
  app->add_option("--nu", f.nu, "Student-t degrees of freedom")->capture_default_str();
  app->add_option("--iters", f.iters, "sweeps per chain")->capture_default_str();
  app->add_option("--burn", f.burn, "burn-in sweeps")->capture_default_str();
  app->add_option("--thin", f.thin, "thinning interval")->capture_default_str();
  app->add_option("--grid-q", f.grid_q, "q grid cells")->capture_default_str();
  app->add_option("--grid-r2", f.grid_r2, "R^2 grid cells")->capture_default_str();
  app->add_option("--seed", f.seed, "base seed (default 0 or $SLABSPIKE_SEED)");
  app->add_option("--chains", f.chains, "independent chains")->capture_default_str();
  app->add_option("--jobs", f.jobs, "chains run at once (0 = up to --chains)");
}

Dataset load_dataset(const DataOptions& d, std::string* digest = nullptr) {
  if (digest) *digest = file_digest(d.input);
  return standardize(dataset_from_table(read_csv_file(d.input), d.response, d.always_include));
}

ordered_json spec_json(const SlabSpec& s, int chains) {
  ordered_json j;
  j["family"] = s.slab.is_student_t() ? "t" : "gaussian";
  if (s.slab.is_student_t()) j["nu"] = s.slab.nu;
  j["iters"] = s.n_iter;
  j["burn"] = s.n_burn;
  j["thin"] = s.thin;
  j["grid_q"] = s.grid_q;
  j["grid_r2"] = s.grid_r2;
  j["seed"] = s.seed;
  j["chains"] = chains;
  return j;
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
  std::ostringstream out;
  writer(out);
  write_text_file(path, out.str());
}

std::string slab_label(const SlabSpec& s) { return s.slab.label(); }

double label_key(const std::string& label) {
  if (label.size() > 1 && label[0] == 't') return std::stod(label.substr(1));
  return std::numeric_limits<double>::infinity();
}

// Traces, summary, single-row inclusion matrix and densities for one model.
PosteriorSummary write_model_outputs(const fs::path& dir, const std::vector<TraceStore>& chains,
                                     const std::vector<std::string>& names, const std::string& label,
                                     bool write_traces) {
  fs::create_directories(dir);
  if (write_traces)
    for (std::size_t c = 0; c < chains.size(); ++c)
      write_file(dir / ("trace_" + std::to_string(c) + ".csv"), [&](std::ostream& o) { write_trace_csv(o, chains[c]); });
  const auto summary = summarize(chains, names);
  write_file(dir / "summary.json", [&](std::ostream& o) { write_summary_json(o, summary); });
  const auto heat = heatmap_matrix({{label, label_key(label), summary.inc}}, names);
  write_file(dir / "inclusion.csv", [&](std::ostream& o) { write_inclusion_csv(o, heat); });
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (summary.density[j].kind == DensityEstimate::Kind::Missing) continue;
    write_file(dir / ("density_" + file_safe(names[j]) + ".csv"),
               [&](std::ostream& o) { write_density_csv(o, summary.density[j]); });
  }
  return summary;
}

void write_manifest(const fs::path& dir, ordered_json manifest) {
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

ordered_json base_manifest(const std::string& command, const DataOptions& d, const std::string& digest,
                           const Dataset& data) {
  ordered_json m;
  m["command"] = command;
  m["version"] = SLABSPIKE_VERSION;
  m["input"] = fs::path(d.input).filename().string();
  m["input_digest"] = digest;
  m["response"] = d.response;
  m["always_include"] = d.always_include;
  m["predictors"] = data.names;
  return m;
}

int run_fit(const DataOptions& d, const SamplerFlags& f, const std::string& out) {
  const SlabSpec spec = f.spec();
  std::string digest;
  const Dataset data = load_dataset(d, &digest);
  const auto chains = run_chains(data, spec, f.chains, f.parallel());
  const auto summary = write_model_outputs(out, chains, data.names, slab_label(spec), true);
  auto m = base_manifest("fit", d, digest, data);
  m["spec"] = spec_json(spec, f.chains);
  write_manifest(out, m);
  for (std::size_t j = 0; j < data.names.size(); ++j)
    std::cout << data.names[j] << " inc=" << format_double(summary.inc[static_cast<Index>(j)]) << '\n';
  return 0;
}

std::string row_dir(const Slab& slab) {
  if (!slab.is_student_t()) return "gaussian";
  char buf[32];
  std::snprintf(buf, sizeof buf, "nu_%g", slab.nu);
  return buf;
}

int run_sweep(const DataOptions& d, const SamplerFlags& f, std::vector<double> nus, bool gaussian,
              const std::string& out) {
  const SlabSpec spec = f.spec();
  std::string digest;
  const Dataset data = load_dataset(d, &digest);
  if (nus.empty()) nus = default_nu_grid();
  const auto runs = nu_sweep(data, spec, nus, gaussian, f.chains, f.parallel());

  fs::create_directories(out);
  std::vector<HeatmapEntry> rows;
  ordered_json row_status = ordered_json::array();
  bool failed = false;
  for (const auto& r : runs) {
    const fs::path dir = fs::path(out) / row_dir(r.slab);
    ordered_json status{{"model", r.slab.label()}, {"dir", row_dir(r.slab)}};
    if (r.error) {
      failed = true;
      fs::create_directories(dir);
      write_text_file(dir / "error.txt", *r.error + "\n");
      status["error"] = *r.error;
      std::cerr << "error: " << r.slab.label() << ": " << *r.error << '\n';
    } else {
      const auto s = write_model_outputs(dir, r.chains, data.names, r.slab.label(), true);
      rows.push_back({r.slab.label(), r.key(), s.inc});
    }
    row_status.push_back(status);
  }
  if (!rows.empty()) {
    const auto heat = heatmap_matrix(rows, data.names);
    write_file(fs::path(out) / "inclusion.csv", [&](std::ostream& o) { write_inclusion_csv(o, heat); });
  }
  auto m = base_manifest("sweep", d, digest, data);
  m["spec"] = spec_json(spec, f.chains);
  m["spec"].erase("family");
  m["spec"].erase("nu");
  m["rows"] = row_status;
  m["row_seed"] = "derive_seed(seed, row index)";
  write_manifest(out, m);
  return failed ? kExitNumericalError : 0;
}

std::vector<fs::path> trace_files(const fs::path& dir) {
  std::vector<fs::path> files;
  if (!fs::is_directory(dir)) return files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (e.is_regular_file() && name.rfind("trace_", 0) == 0 && e.path().extension() == ".csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    const auto idx = [](const fs::path& p) { return std::stol(p.stem().string().substr(6)); };
    return idx(a) < idx(b);
  });
  return files;
}

std::vector<TraceStore> load_traces(const fs::path& dir) {
  std::vector<TraceStore> chains;
  for (const auto& p : trace_files(dir)) {
    std::ifstream in(p, std::ios::binary);
    try {
      chains.push_back(read_trace_csv(in));
    } catch (const DataError& e) {
      throw DataError(p.filename().string() + ": " + e.what());
    }
  }
  return chains;
}

std::vector<std::string> manifest_names(const fs::path& dir, Index k) {
  const fs::path p = dir / "manifest.json";
  if (fs::exists(p)) {
    const auto m = nlohmann::json::parse(read_text_file(p), nullptr, false);
    if (!m.is_discarded() && m.contains("predictors")) {
      auto names = m["predictors"].get<std::vector<std::string>>();
      if (static_cast<Index>(names.size()) == k) return names;
    }
  }
  return default_names(k);
}

std::string manifest_label(const fs::path& dir) {
  const fs::path p = dir / "manifest.json";
  if (fs::exists(p)) {
    const auto m = nlohmann::json::parse(read_text_file(p), nullptr, false);
    if (!m.is_discarded() && m.contains("spec") && m["spec"].contains("family")) {
      if (m["spec"]["family"] == "t") return Slab::student_t(m["spec"]["nu"].get<double>()).label();
      return "gaussian";
    }
  }
  return dir.filename().string();
}

int run_report(const std::string& dir_arg) {
  const fs::path dir(dir_arg);
  if (!fs::is_directory(dir)) throw DataError("'" + dir_arg + "' is not a directory");

  const auto chains = load_traces(dir);
  if (!chains.empty()) {
    const auto names = manifest_names(dir, chains.front().k());
    write_model_outputs(dir, chains, names, manifest_label(dir), false);
    return 0;
  }

  // Sweep layout: one model per subdirectory.
  std::vector<fs::path> subdirs;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_directory() && !trace_files(e.path()).empty()) subdirs.push_back(e.path());
  if (subdirs.empty()) throw DataError("no trace files under '" + dir_arg + "'");
  std::sort(subdirs.begin(), subdirs.end());

  std::vector<HeatmapEntry> rows;
  std::vector<std::string> names;
  for (const auto& sub : subdirs) {
    const auto row_chains = load_traces(sub);
    if (names.empty()) names = manifest_names(dir, row_chains.front().k());
    const std::string name = sub.filename().string();
    const std::string label = name == "gaussian" ? "gaussian" : "t" + name.substr(name.find('_') + 1);
    const auto s = write_model_outputs(sub, row_chains, names, label, false);
    rows.push_back({label, label_key(label), s.inc});
  }
  const auto heat = heatmap_matrix(rows, names);
  write_file(dir / "inclusion.csv", [&](std::ostream& o) { write_inclusion_csv(o, heat); });
  return 0;
}

int run_simulate(const SimScenario& sc, const std::string& out) {
  const Dataset d = simulate_dataset(sc);
  write_file(out, [&](std::ostream& o) {
    const auto t = dataset_to_table(d);
    write_csv(o, t.header, t.values);
  });
  return 0;
}

int run_inject(const DataOptions& d, Index count, std::uint64_t seed, const std::string& out) {
  const Dataset raw = dataset_from_table(read_csv_file(d.input), d.response, d.always_include);
  const Dataset injected = inject_random(raw, count, seed);
  write_file(out, [&](std::ostream& o) {
    const auto t = dataset_to_table(injected);
    write_csv(o, t.header, t.values);
  });
  return 0;
}

int run_baseline(const DataOptions& d, const std::string& penalty, double lambda, const std::string& out) {
  const Dataset data = load_dataset(d);
  Vector beta;
  if (penalty == "ridge") {
    beta = ridge_fit(data, lambda);
  } else {
    const auto r = lasso_fit(data, lambda);
    if (!r.converged) std::cerr << "warning: lasso stopped after " << r.iterations << " iterations\n";
    beta = r.beta;
  }
  std::ostringstream o;
  o << "predictor,coefficient\n";
  for (Index j = 0; j < data.k(); ++j) o << data.names[static_cast<std::size_t>(j)] << ',' << format_double(beta[j]) << '\n';
  if (out.empty() || out == "-")
    std::cout << o.str();
  else
    write_text_file(out, o.str());
  return 0;
}

int run_geweke(const DataShape& shape, const SamplerFlags& f, Index draws, bool corrupt) {
  const SlabSpec spec = f.spec();
  GewekeOptions opts;
  if (corrupt) opts.sampler.sigma2_shape_factor = 2.0;
  const auto report = geweke_joint_test(shape, spec, draws, opts);
  for (const auto& m : report.moments)
    std::cout << m.name << " prior=" << format_double(m.prior_mean) << " chain=" << format_double(m.chain_mean)
              << " z=" << format_double(m.z) << '\n';
  std::cout << (report.passed() ? "PASS" : "FAIL") << " max|z|=" << format_double(report.max_abs_z()) << '\n';
  return report.passed() ? 0 : 1;
}

void apply_env_seed(SamplerFlags& f, const CLI::App* sub) {
  if (sub->count("--seed")) return;
  if (const char* env = std::getenv("SLABSPIKE_SEED")) {
    try {
      std::size_t used = 0;
      f.seed = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw DomainError(std::string("SLABSPIKE_SEED is not an unsigned integer: '") + env + "'");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spike-and-slab Bayesian regression with Gaussian or Student-t slabs"};
  app.set_version_flag("--version", SLABSPIKE_VERSION);
  app.require_subcommand(1);

  DataOptions data;
  SamplerFlags flags;
  std::string out;

  auto* fit = app.add_subcommand("fit", "sample the posterior and write traces and summaries");
  add_data_flags(fit, data);
  add_sampler_flags(fit, flags);
  fit->add_option("--out", out, "output directory")->required();

  std::vector<double> nus;
  bool no_gaussian = false;
  auto* sweep = app.add_subcommand("sweep", "one run per nu plus a Gaussian run");
  add_data_flags(sweep, data);
  add_sampler_flags(sweep, flags);
  sweep->add_option("--nus", nus, "degrees of freedom (default 4,10,30,100,500)")->delimiter(',');
  sweep->add_flag("--no-gaussian", no_gaussian, "skip the Gaussian row");
  sweep->add_option("--out", out, "output directory")->required();

  std::string report_dir;
  auto* report = app.add_subcommand("report", "rebuild summaries from stored traces");
  report->add_option("--dir", report_dir, "fit or sweep output directory")->required();

  SimScenario scenario;
  auto* simulate = app.add_subcommand("simulate", "write a simulated sparse dataset");
  simulate->add_option("--s", scenario.s, "noise scenario, sd 0.75 s")->capture_default_str();
  simulate->add_option("--n", scenario.n, "rows")->capture_default_str();
  simulate->add_option("--k", scenario.k, "candidate predictors")->capture_default_str();
  simulate->add_option("--beta", scenario.beta_true, "leading nonzero coefficients")->delimiter(',');
  simulate->add_option("--seed", flags.seed, "seed (default 0 or $SLABSPIKE_SEED)");
  simulate->add_option("--out", out, "output CSV")->required();

  Index count = 2;
  auto* inject = app.add_subcommand("inject", "append random standard-normal predictors");
  add_data_flags(inject, data);
  inject->add_option("--count", count, "columns to add")->capture_default_str();
  inject->add_option("--seed", flags.seed, "seed (default 0 or $SLABSPIKE_SEED)");
  inject->add_option("--out", out, "output CSV")->required();

  std::string penalty = "ridge";
  double lambda = 1.0;
  auto* baseline = app.add_subcommand("baseline", "ridge or lasso coefficients");
  add_data_flags(baseline, data);
  baseline->add_option("--penalty", penalty)->check(CLI::IsMember({"ridge", "lasso"}))->capture_default_str();
  baseline->add_option("--lambda", lambda, "penalty weight")->capture_default_str();
  baseline->add_option("--out", out, "output CSV (default stdout)");

  DataShape shape;
  Index draws = 100000;
  bool corrupt = false;
  auto* geweke = app.add_subcommand("geweke", "joint-distribution test of the sampler");
  add_sampler_flags(geweke, flags);
  geweke->add_option("--n", shape.n)->capture_default_str();
  geweke->add_option("--k", shape.k)->capture_default_str();
  geweke->add_option("--l", shape.l)->capture_default_str();
  geweke->add_option("--draws", draws)->capture_default_str();
  geweke->add_flag("--corrupt-sigma2", corrupt, "double the data part of the sigma^2 shape");

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto* sub : {fit, sweep, simulate, inject, geweke})
      if (*sub) apply_env_seed(flags, sub);
    if (*fit) return run_fit(data, flags, out);
    if (*sweep) return run_sweep(data, flags, nus, !no_gaussian, out);
    if (*report) return run_report(report_dir);
    if (*simulate) {
      scenario.seed = flags.seed;
      return run_simulate(scenario, out);
    }
    if (*inject) return run_inject(data, count, flags.seed, out);
    if (*baseline) return run_baseline(data, penalty, lambda, out);
    if (*geweke) {
      if (flags.grid_q == 100 && !geweke->count("--grid-q")) flags.grid_q = 20;
      if (flags.grid_r2 == 100 && !geweke->count("--grid-r2")) flags.grid_r2 = 20;
      return run_geweke(shape, flags, draws, corrupt);
    }
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const DomainError& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitDataError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
