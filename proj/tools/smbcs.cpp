// smbcs command-line tool. See README.md for the subcommands and file formats.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "smbcs/config.hpp"
#include "smbcs/errors.hpp"
#include "smbcs/interferometer.hpp"
#include "smbcs/io.hpp"
#include "smbcs/permanent.hpp"
#include "smbcs/rng.hpp"
#include "smbcs/sampler.hpp"
#include "smbcs/scattershot.hpp"

#ifndef SMBCS_VERSION
#define SMBCS_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace smbcs;

namespace {

constexpr int kExitInvalidConfig = 2;
constexpr int kExitGuard = 3;
constexpr int kExitNumeric = 4;
constexpr const char* kOutputDirEnv = "SMBCS_OUTPUT_DIR";

// Flag values that override the config file when given.
class Overrides {
 public:
  template <typename T, typename Apply>
  CLI::Option* add(CLI::App& app, const std::string& name, const std::string& description,
                   Apply apply) {
    auto value = std::make_shared<T>();
    CLI::Option* option = app.add_option(name, *value, description);
    items_.push_back({option, [value, apply](ExperimentConfig& c) { apply(c, *value); }});
    return option;
  }

  template <typename Apply>
  CLI::Option* add_switch(CLI::App& app, const std::string& name,
                          const std::string& description, Apply apply) {
    auto value = std::make_shared<bool>(false);
    CLI::Option* option = app.add_flag(name, *value, description);
    items_.push_back({option, [value, apply](ExperimentConfig& c) { apply(c, *value); }});
    return option;
  }

  void apply(ExperimentConfig& config) const {
    for (const auto& [option, fn] : items_) {
      if (option->count() > 0) fn(config);
    }
  }

 private:
  std::vector<std::pair<CLI::Option*, std::function<void(ExperimentConfig&)>>> items_;
};

struct Run {
  std::string subcommand;
  ExperimentConfig config;
  std::string hash;
  fs::path output_dir;
  std::vector<std::string> outputs;

  fs::path file(const std::string& name) {
    outputs.push_back(name);
    return output_dir / name;
  }
};

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path.string());
  return out;
}

std::string join(const std::vector<std::size_t>& values, char sep = ' ') {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(values[i]);
  }
  return s;
}

std::string join_doubles(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ' ';
    s += format_double(values[i]);
  }
  return s;
}

std::vector<std::size_t> parse_indices(const std::string& text) {
  std::vector<std::size_t> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      values.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw DomainError("expected a comma-separated list of indices, got '" + text + "'");
    }
  }
  return values;
}

std::vector<std::string> header(std::initializer_list<const char*> names) {
  std::vector<std::string> h{"schema_version", "config_hash", "seed"};
  h.insert(h.end(), names.begin(), names.end());
  return h;
}

std::vector<std::string> prefix(const Run& run) {
  return {std::to_string(kSchemaVersion), run.hash, std::to_string(run.config.seed)};
}

void write_manifest(Run& run) {
  const std::string name = run.subcommand + ".manifest.json";
  json manifest = {{"tool", "smbcs"},
                   {"version", SMBCS_VERSION},
                   {"schema_version", kSchemaVersion},
                   {"subcommand", run.subcommand},
                   {"seed", run.config.seed},
                   {"generator", std::string(kGeneratorName)},
                   {"config_hash", run.hash},
                   {"config", to_json(run.config)},
                   {"outputs", run.outputs}};
  manifest["config"].erase("output_dir");
  auto out = open_output(run.output_dir / name);
  out << manifest.dump(2) << '\n';
}

Interferometer make_interferometer(const ExperimentConfig& config) {
  if (!config.unitary_file.empty()) {
    Interferometer u = load_unitary(config.unitary_file);
    if (u.dimension() < config.plan().sources()) {
      throw DomainError("unitary file has M = " + std::to_string(u.dimension()) +
                        " < ceil(a N) = " + std::to_string(config.plan().sources()));
    }
    if (config.ports != 0 && config.ports != u.dimension()) {
      throw DomainError("unitary file dimension differs from the configured ports");
    }
    return u;
  }
  return haar_random(config.port_count(), config.seed);
}

// Input photons at ports 0..N-1 carrying the given inner-mode indices.
InputConfiguration fixed_inputs(const ExperimentConfig& config,
                                const std::vector<std::size_t>& modes) {
  const InnerModeGrid grid = config.inner_mode_grid();
  InputConfiguration inputs;
  for (std::size_t s = 0; s < config.photons; ++s) {
    const std::size_t index = modes.empty() ? s % grid.size() : modes.at(s);
    inputs.push_back({s, inner_mode(config.source.flavor, grid, index)});
  }
  return inputs;
}

std::vector<std::size_t> resolve_modes(const ExperimentConfig& config,
                                       const std::string& text) {
  if (text.empty()) return {};
  auto modes = parse_indices(text);
  if (modes.size() != config.photons) {
    throw DomainError("--modes needs one inner-mode index per photon");
  }
  for (auto m : modes) {
    if (m >= config.source.inner_modes) throw DomainError("--modes index >= k");
  }
  return modes;
}

void run_simulate(Run& run, const std::string& save_unitary_path) {
  const auto& c = run.config;
  const Interferometer u = make_interferometer(c);
  if (!save_unitary_path.empty()) save_unitary(save_unitary_path, u);
  Sampler sampler(c.plan(), u, c.sampler_config(), c.seed);

  auto jsonl = open_output(run.file("simulate.jsonl"));
  auto csv_out = open_output(run.file("simulate.csv"));
  CsvWriter csv(csv_out, header({"index", "status", "n_total", "emitted_photons", "input_ports",
                                 "inner_modes", "outcome_ports", "outcome_bins",
                                 "probability"}));
  std::uint64_t counts[3] = {0, 0, 0};
  for (std::uint64_t i = 0; i < c.trials; ++i) {
    const SampleRecord r = sampler.draw(i);
    ++counts[static_cast<int>(r.status)];
    jsonl << sample_record_to_json(r, run.hash).dump() << '\n';
    auto row = prefix(run);
    row.insert(row.end(),
               {std::to_string(i), std::string(to_string(r.status)), std::to_string(r.n_total),
                std::to_string(r.emitted_photons), join(r.input_ports),
                join(r.inner_mode_indices), r.outcome ? join(r.outcome->ports) : "",
                r.outcome ? join(r.outcome->bins) : "",
                r.outcome ? format_double(r.probability) : ""});
    csv.row(row);
  }
  std::cout << json{{"subcommand", "simulate"},
                    {"samples", c.trials},
                    {"complete", counts[0]},
                    {"failed", counts[1]},
                    {"unsampled", counts[2]},
                    {"config_hash", run.hash}}
                   .dump()
            << '\n';
}

void run_success_prob(Run& run, const std::string& modes, bool monte_carlo) {
  const auto& c = run.config;
  std::vector<bool> feed_forward;
  if (modes == "both" || modes == "feed_forward") feed_forward.push_back(true);
  if (modes == "both" || modes == "no_feed_forward") feed_forward.push_back(false);
  if (feed_forward.empty()) throw DomainError("--modes must be both, feed_forward or no_feed_forward");

  auto out = open_output(run.file("success_prob.csv"));
  CsvWriter csv(out, header({"N", "a", "gamma", "k", "mode", "P_analytic", "P_mc", "mc_stderr",
                             "trials", "mean_photons", "std_photons"}));
  double min_p[2] = {1.0, 1.0};
  for (bool ff : feed_forward) {
    SpdcSource source = c.source;
    source.feed_forward = ff;
    for (std::size_t n = c.curve.n_min; n <= c.curve.n_max; ++n) {
      const ExperimentPlan plan{n, c.multiplier, source};
      const double p = success_probability_analytic(plan);
      min_p[ff ? 0 : 1] = std::min(min_p[ff ? 0 : 1], p);
      const auto stats = total_photon_statistics(plan);
      std::string p_mc, stderr_mc, trials = "0";
      if (monte_carlo) {
        const auto mc = success_probability_mc(plan, c.trials, c.seed);
        p_mc = format_double(mc.probability);
        stderr_mc = format_double(mc.standard_error);
        trials = std::to_string(mc.trials);
      }
      auto row = prefix(run);
      row.insert(row.end(), {std::to_string(n), format_double(c.multiplier),
                             format_double(source.squeezing),
                             std::to_string(source.inner_modes),
                             ff ? "feed_forward" : "no_feed_forward", format_double(p), p_mc,
                             stderr_mc, trials, format_double(stats.mean),
                             format_double(stats.std_dev)});
      csv.row(row);
    }
  }
  json summary = {{"subcommand", "success-prob"}, {"config_hash", run.hash}};
  if (modes != "no_feed_forward") summary["min_P_feed_forward"] = min_p[0];
  if (modes != "feed_forward") summary["min_P_no_feed_forward"] = min_p[1];
  std::cout << summary.dump() << '\n';
}

void run_perm_bench(Run& run) {
  const auto& c = run.config;
  auto out = open_output(run.file("perm_bench.csv"));
  CsvWriter csv(out, header({"n", "kernel", "wall_time_ns", "abs_perm"}));
  using Kernel = Complex (*)(const ComplexMatrix&, const PermanentLimits&);
  const std::pair<const char*, Kernel> kernels[] = {
      {"naive", &perm_naive}, {"ryser", &perm_fast}, {"glynn", &perm_glynn}};
  for (std::size_t n = c.bench.n_min; n <= c.bench.n_max; ++n) {
    auto rng = Philox::for_stream(c.seed, "perm-bench", n);
    ComplexMatrix a(n, n);
    for (auto& z : a.data()) {
      const auto [x, y] = standard_normal_pair(rng);
      z = Complex(x, y) / std::sqrt(2.0);
    }
    for (const auto& [name, kernel] : kernels) {
      if (kernel == &perm_naive && n > c.permanent_limits.naive_max_order) continue;
      if (n > c.permanent_limits.fast_max_order) {
        throw GuardExceeded("perm-bench: n = " + std::to_string(n) + " exceeds the guard");
      }
      std::int64_t best = std::numeric_limits<std::int64_t>::max();
      Complex value;
      for (std::size_t r = 0; r < c.bench.repeats; ++r) {
        const auto start = std::chrono::steady_clock::now();
        value = kernel(a, c.permanent_limits);
        const auto stop = std::chrono::steady_clock::now();
        best = std::min<std::int64_t>(
            best, std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
      }
      auto row = prefix(run);
      row.insert(row.end(),
                 {std::to_string(n), name, std::to_string(best), format_double(std::abs(value))});
      csv.row(row);
    }
  }
}

void run_distribution(Run& run, const std::string& modes_text, std::uint64_t samples,
                      const std::string& outcome_ports, const std::string& outcome_bins,
                      const std::string& save_unitary_path) {
  const auto& c = run.config;
  const Interferometer u = make_interferometer(c);
  if (!save_unitary_path.empty()) save_unitary(save_unitary_path, u);
  const InputConfiguration inputs = fixed_inputs(c, resolve_modes(c, modes_text));
  const ResolvedDomain domain = detection_domain(c.source.flavor);
  const double bin_width = c.sampler_config().bin_width(c.source.flavor);

  if (!outcome_ports.empty() || !outcome_bins.empty()) {
    // A single user-specified outcome, no enumeration guard.
    const DetectionOutcome outcome{domain, parse_indices(outcome_ports),
                                   parse_indices(outcome_bins),
                                   make_detection_grid(inputs, domain, bin_width)};
    const auto eval = evaluate_outcome(u, inputs, outcome, c.probability_options());
    auto out = open_output(run.file("outcome.jsonl"));
    out << outcome_record(outcome, eval.probability, eval.perm_modulus, c.seed, run.hash).dump()
        << '\n';
    return;
  }

  const auto dist = brute_force_distribution(u, inputs, domain, bin_width,
                                             c.brute_force_limits, c.probability_options());
  auto csv_out = open_output(run.file("distribution.csv"));
  auto jsonl = open_output(run.file("distribution.jsonl"));
  CsvWriter csv(csv_out, header({"mode", "ports", "bins", "values", "probability",
                                 "perm_modulus"}));
  for (std::size_t i = 0; i < dist.entries.size(); ++i) {
    const auto& e = dist.entries[i];
    const DetectionOutcome outcome = dist.outcome(i);
    auto row = prefix(run);
    row.insert(row.end(), {std::string(to_string(domain)), join(e.ports), join(e.bins),
                           join_doubles(outcome.resolved_values()),
                           format_double(e.probability), format_double(e.perm_modulus)});
    csv.row(row);
    jsonl << outcome_record(outcome, e.probability, e.perm_modulus, c.seed, run.hash).dump()
          << '\n';
  }

  if (samples > 0) {
    // Convergence of the empirical distribution of inverse-CDF draws.
    auto tvd_out = open_output(run.file("tvd.csv"));
    CsvWriter tvd(tvd_out, header({"samples", "tvd"}));
    std::vector<double> probs;
    for (const auto& e : dist.entries) probs.push_back(e.probability / dist.total);
    std::vector<std::uint64_t> counts(dist.entries.size(), 0);
    std::uint64_t next_report = 10;
    for (std::uint64_t i = 0; i < samples; ++i) {
      auto rng = Philox::for_stream(c.seed, "distribution", i);
      ++counts[sample_outcome_index(dist, rng)];
      if (i + 1 == next_report || i + 1 == samples) {
        auto row = prefix(run);
        row.insert(row.end(), {std::to_string(i + 1),
                               format_double(total_variation_distance(counts, probs))});
        tvd.row(row);
        next_report *= 10;
      }
    }
  }
  std::cout << json{{"subcommand", "distribution"},
                    {"outcomes", dist.entries.size()},
                    {"total", dist.total},
                    {"resolution_ratio", dist.resolution.max_ratio},
                    {"resolution_satisfied", dist.resolution.satisfied},
                    {"config_hash", run.hash}}
                   .dump()
            << '\n';
}

void run_diagnose_gaussian(Run& run) {
  const auto& c = run.config;
  const auto r = gaussian_entry_diagnostics(c.gaussian.ports, c.gaussian.photons,
                                            c.source.inner_modes, c.gaussian.trials, c.seed,
                                            c.gaussian.random_phases);
  auto out = open_output(run.file("gaussian.csv"));
  CsvWriter csv(out, header({"M", "N", "k", "trials", "samples", "random_phases", "re_mean",
                             "re_variance", "re_excess_kurtosis", "im_mean", "im_variance",
                             "im_excess_kurtosis", "re_im_correlation", "row_correlation",
                             "column_correlation", "modulus_row_correlation",
                             "max_abs_correlation", "kurtosis_gaussian",
                             "below_recommended_ports"}));
  auto row = prefix(run);
  row.insert(row.end(),
             {std::to_string(r.ports), std::to_string(r.photons), std::to_string(r.inner_modes),
              std::to_string(r.trials), std::to_string(r.samples),
              r.random_phases ? "1" : "0", format_double(r.real.mean),
              format_double(r.real.variance), format_double(r.real.excess_kurtosis),
              format_double(r.imag.mean), format_double(r.imag.variance),
              format_double(r.imag.excess_kurtosis), format_double(r.re_im_correlation),
              format_double(r.row_correlation), format_double(r.column_correlation),
              format_double(r.modulus_row_correlation), format_double(r.max_abs_correlation),
              r.kurtosis_gaussian ? "1" : "0", r.below_recommended_ports ? "1" : "0"});
  csv.row(row);
}

void run_check_resolution(Run& run, const std::string& modes_text,
                          std::optional<double> bin_width_override) {
  const auto& c = run.config;
  const InputConfiguration inputs = fixed_inputs(c, resolve_modes(c, modes_text));
  const ResolvedDomain domain = detection_domain(c.source.flavor);
  const double bin_width =
      bin_width_override.value_or(c.sampler_config().bin_width(c.source.flavor));
  const auto report = check_resolution(inputs, domain, bin_width, c.epsilon);

  // Inner-mode budget at this resolution, with the conjugate resolution taken
  // as one bin of the other axis.
  const double dt = domain == ResolvedDomain::Time ? bin_width : 1.0 / c.grid.bandwidth;
  const double dw = domain == ResolvedDomain::Frequency ? bin_width : c.grid.bandwidth;
  std::optional<double> rate;
  if (c.source.flavor == Flavor::RTM) rate = 1.0 / c.grid.spacing;
  const std::size_t k_max = max_inner_modes(c.source.flavor, dt, dw, rate, c.epsilon);

  auto out = open_output(run.file("resolution.csv"));
  CsvWriter csv(out, header({"domain", "bin_width", "epsilon", "max_ratio", "satisfied",
                             "worst_a", "worst_b", "k", "k_max"}));
  auto row = prefix(run);
  row.insert(row.end(), {std::string(to_string(domain)), format_double(bin_width),
                         format_double(c.epsilon), format_double(report.max_ratio),
                         report.satisfied ? "1" : "0", std::to_string(report.worst_pair.first),
                         std::to_string(report.worst_pair.second),
                         std::to_string(c.source.inner_modes), std::to_string(k_max)});
  csv.row(row);
  std::cout << json{{"subcommand", "check-resolution"},
                    {"max_ratio", report.max_ratio},
                    {"satisfied", report.satisfied},
                    {"k_max", k_max}}
                   .dump()
            << '\n';
}

int fail(const char* kind, const std::string& message, int code) {
  std::cerr << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scattershot multiboson correlation sampling simulator"};
  app.set_version_flag("--version", SMBCS_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string output_dir_flag;
  app.add_option("-c,--config", config_path, "JSON config or run manifest")
      ->check(CLI::ExistingFile);
  app.add_option("-o,--output-dir", output_dir_flag,
                 std::string("Output directory (default: $") + kOutputDirEnv + " or .)");

  Overrides o;
  o.add<std::size_t>(app, "-N,--photons", "Target photon number N",
                     [](auto& c, auto v) { c.photons = v; });
  o.add<std::size_t>(app, "-M,--ports", "Interferometer size M (0: one port per source)",
                     [](auto& c, auto v) { c.ports = v; });
  o.add<double>(app, "-a,--multiplier", "Source multiplier a",
                [](auto& c, auto v) { c.multiplier = v; });
  o.add<double>(app, "-g,--gamma", "Squeezing gamma",
                [](auto& c, auto v) { c.source.squeezing = v; });
  o.add<std::size_t>(app, "-k,--inner-modes", "Inner modes per source k",
                     [](auto& c, auto v) { c.source.inner_modes = v; });
  o.add<std::string>(app, "--flavor", "rfm or rtm",
                     [](auto& c, const auto& v) { c.source.flavor = flavor_from_string(v); });
  o.add_switch(app, "--feed-forward,!--no-feed-forward", "Feed-forward blocking",
               [](auto& c, bool v) { c.source.feed_forward = v; });
  o.add_switch(app, "--strict-single-pair,!--no-strict-single-pair",
               "Herald only inner modes with exactly one pair",
               [](auto& c, bool v) { c.source.strict_single_pair = v; });
  o.add<double>(app, "--grid-base", "First inner-mode value (RFM: rad/s, RTM: s)",
                [](auto& c, auto v) { c.grid.base = v; });
  o.add<double>(app, "--grid-spacing", "Inner-mode spacing (RFM: rad/s, RTM: 1/f_p in s)",
                [](auto& c, auto v) { c.grid.spacing = v; });
  o.add<double>(app, "--grid-common", "Shared value (RFM: start time, RTM: frequency)",
                [](auto& c, auto v) { c.grid.common = v; });
  o.add<double>(app, "--bandwidth", "Photon bandwidth Dw in rad/s",
                [](auto& c, auto v) { c.grid.bandwidth = v; });
  o.add<std::size_t>(app, "-b,--bins", "Detector bins per envelope width",
                     [](auto& c, auto v) { c.bins_per_envelope = v; });
  o.add<double>(app, "--epsilon", "Resolution tolerance",
                [](auto& c, auto v) { c.epsilon = v; });
  o.add<std::string>(app, "--policy", "strict or permissive", [](auto& c, const auto& v) {
    c.resolution_policy = resolution_policy_from_string(v);
  });
  o.add<std::uint64_t>(app, "-t,--trials", "Samples or Monte Carlo trials",
                       [](auto& c, auto v) { c.trials = v; });
  o.add<std::uint64_t>(app, "-s,--seed", "Master seed", [](auto& c, auto v) { c.seed = v; });
  o.add<std::string>(app, "--unitary-file", "Load a fixed unitary (JSON or binary)",
                     [](auto& c, const auto& v) { c.unitary_file = v; });

  auto* simulate = app.add_subcommand("simulate", "Draw SMBCS samples");
  std::string save_unitary_path;
  simulate->add_option("--save-unitary", save_unitary_path, "Write the unitary used");

  auto* success = app.add_subcommand("success-prob", "Success probability curves");
  std::string curve_modes = "both";
  bool skip_mc = false;
  success->add_option("--modes", curve_modes, "both, feed_forward or no_feed_forward");
  success->add_flag("--no-mc", skip_mc, "Skip the Monte Carlo column");
  o.add<std::size_t>(*success, "--n-min", "Smallest N", [](auto& c, auto v) { c.curve.n_min = v; });
  o.add<std::size_t>(*success, "--n-max", "Largest N", [](auto& c, auto v) { c.curve.n_max = v; });

  auto* bench = app.add_subcommand("perm-bench", "Time the permanent kernels");
  o.add<std::size_t>(*bench, "--n-min", "Smallest order", [](auto& c, auto v) { c.bench.n_min = v; });
  o.add<std::size_t>(*bench, "--n-max", "Largest order", [](auto& c, auto v) { c.bench.n_max = v; });
  o.add<std::size_t>(*bench, "--repeats", "Timing repeats (minimum is kept)",
                     [](auto& c, auto v) { c.bench.repeats = v; });

  auto* distribution = app.add_subcommand("distribution", "Exact outcome distribution");
  std::string dist_modes, outcome_ports, outcome_bins, dist_unitary;
  std::uint64_t dist_samples = 0;
  distribution->add_option("--modes", dist_modes, "Inner-mode index per photon, e.g. 0,3");
  distribution->add_option("--samples", dist_samples, "Also draw samples and write tvd.csv");
  distribution->add_option("--outcome-ports", outcome_ports,
                           "Evaluate one outcome instead of enumerating");
  distribution->add_option("--outcome-bins", outcome_bins, "Bins of --outcome-ports");
  distribution->add_option("--save-unitary", dist_unitary, "Write the unitary used");

  auto* gaussian = app.add_subcommand("diagnose-gaussian", "Moments of scaled submatrix entries");
  o.add<std::size_t>(*gaussian, "--diag-ports", "Interferometer size",
                     [](auto& c, auto v) { c.gaussian.ports = v; });
  o.add<std::size_t>(*gaussian, "--diag-photons", "Submatrix order",
                     [](auto& c, auto v) { c.gaussian.photons = v; });
  o.add<std::uint64_t>(*gaussian, "--diag-trials", "Haar draws",
                       [](auto& c, auto v) { c.gaussian.trials = v; });
  o.add_switch(*gaussian, "--random-phases,!--zero-phases", "Random w_s t_d phases",
               [](auto& c, bool v) { c.gaussian.random_phases = v; });

  auto* resolution = app.add_subcommand("check-resolution", "Detector resolution check");
  std::string res_modes;
  std::optional<double> res_bin_width;
  resolution->add_option("--modes", res_modes, "Inner-mode index per photon");
  resolution->add_option("--bin-width", res_bin_width, "Detector resolution (s or rad/s)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("invalid_arguments", e.what(), kExitInvalidConfig);
  }

  try {
    Run run;
    run.subcommand = app.get_subcommands().front()->get_name();
    run.config = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    o.apply(run.config);
    if (!output_dir_flag.empty()) run.config.output_dir = output_dir_flag;
    run.config.validate();
    run.hash = config_hash(run.config);

    if (!run.config.output_dir.empty()) {
      run.output_dir = run.config.output_dir;
    } else if (const char* env = std::getenv(kOutputDirEnv); env && *env) {
      run.output_dir = env;
    } else {
      run.output_dir = ".";
    }
    fs::create_directories(run.output_dir);

    if (run.subcommand == "simulate") {
      run_simulate(run, save_unitary_path);
    } else if (run.subcommand == "success-prob") {
      run_success_prob(run, curve_modes, !skip_mc);
    } else if (run.subcommand == "perm-bench") {
      run_perm_bench(run);
    } else if (run.subcommand == "distribution") {
      run_distribution(run, dist_modes, dist_samples, outcome_ports, outcome_bins, dist_unitary);
    } else if (run.subcommand == "diagnose-gaussian") {
      run_diagnose_gaussian(run);
    } else {
      run_check_resolution(run, res_modes, res_bin_width);
    }
    write_manifest(run);
    return 0;
  } catch (const GuardExceeded& e) {
    return fail("guard_exceeded", e.what(), kExitGuard);
  } catch (const NumericAssertion& e) {
    return fail("numeric_assertion", e.what(), kExitNumeric);
  } catch (const DomainError& e) {
    return fail("invalid_config", e.what(), kExitInvalidConfig);
  } catch (const fs::filesystem_error& e) {
    return fail("io_error", e.what(), 1);
  } catch (const std::exception& e) {
    return fail("internal_error", e.what(), 1);
  }
}
