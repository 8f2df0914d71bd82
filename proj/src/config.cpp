#include "smbcs/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "smbcs/errors.hpp"
#include "smbcs/rng.hpp"

namespace smbcs {

namespace {

using nlohmann::json;

// Reads optional members of one JSON object, rejecting keys it never asked for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw DomainError("config: " + path_ + " must be an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      throw DomainError("config: " + name(key) + " has the wrong type");
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string name(const char* key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw DomainError("config: unknown key " + name(key.c_str()));
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError("config: " + message);
}

json without_output(const ExperimentConfig& config) {
  json j = to_json(config);
  j.erase("output_dir");
  return j;
}

}  // namespace

void ExperimentConfig::validate() const {
  require(photons >= 1, "photons must be >= 1");
  require(std::isfinite(multiplier) && multiplier > 0.0, "multiplier must be > 0");
  try {
    source.validate();
  } catch (const DomainError& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
  require(std::isfinite(grid.base) && std::isfinite(grid.spacing) &&
              std::isfinite(grid.common),
          "grid values must be finite");
  require(std::isfinite(grid.bandwidth) && grid.bandwidth > 0.0,
          "grid.bandwidth must be > 0");
  require(source.flavor == Flavor::RFM || grid.spacing > 0.0,
          "grid.spacing (1/f_p) must be > 0 for rtm");
  require(bins_per_envelope >= 1, "bins_per_envelope must be >= 1");
  require(std::isfinite(epsilon) && epsilon > 0.0, "epsilon must be > 0");
  require(trials >= 1, "trials must be >= 1");
  require(ports == 0 || ports >= plan().sources(),
          "ports must be 0 or at least ceil(a N) = " + std::to_string(plan().sources()));
  require(curve.n_min >= 1 && curve.n_max >= curve.n_min,
          "curve needs 1 <= n_min <= n_max");
  require(bench.n_min >= 1 && bench.n_max >= bench.n_min && bench.repeats >= 1,
          "bench needs 1 <= n_min <= n_max and repeats >= 1");
  require(gaussian.photons >= 1 && gaussian.ports >= gaussian.photons &&
              gaussian.trials >= 1,
          "gaussian needs 1 <= photons <= ports and trials >= 1");
}

std::size_t ExperimentConfig::port_count() const {
  return ports == 0 ? plan().sources() : ports;
}

InnerModeGrid ExperimentConfig::inner_mode_grid() const {
  if (source.flavor == Flavor::RFM) {
    return rfm_grid(source.inner_modes, grid.base, grid.spacing, grid.common, grid.bandwidth);
  }
  return rtm_grid(source.inner_modes, grid.base, 1.0 / grid.spacing, grid.common,
                  grid.bandwidth);
}

ProbabilityOptions ExperimentConfig::probability_options() const {
  return {resolution_policy, epsilon, true};
}

SamplerConfig ExperimentConfig::sampler_config() const {
  return {inner_mode_grid(), bins_per_envelope, brute_force_limits, probability_options()};
}

nlohmann::json to_json(const ExperimentConfig& c) {
  return {
      {"photons", c.photons},
      {"ports", c.ports},
      {"multiplier", c.multiplier},
      {"source",
       {{"gamma", c.source.squeezing},
        {"k", c.source.inner_modes},
        {"flavor", std::string(to_string(c.source.flavor))},
        {"feed_forward", c.source.feed_forward},
        {"strict_single_pair", c.source.strict_single_pair}}},
      {"grid",
       {{"base", c.grid.base},
        {"spacing", c.grid.spacing},
        {"common", c.grid.common},
        {"bandwidth", c.grid.bandwidth}}},
      {"bins_per_envelope", c.bins_per_envelope},
      {"epsilon", c.epsilon},
      {"resolution_policy", std::string(to_string(c.resolution_policy))},
      {"trials", c.trials},
      {"seed", c.seed},
      {"limits",
       {{"naive_max_order", c.permanent_limits.naive_max_order},
        {"fast_max_order", c.permanent_limits.fast_max_order},
        {"brute_force_photons", c.brute_force_limits.max_photons},
        {"brute_force_ports", c.brute_force_limits.max_ports},
        {"brute_force_bins", c.brute_force_limits.max_bins}}},
      {"curve", {{"n_min", c.curve.n_min}, {"n_max", c.curve.n_max}}},
      {"bench",
       {{"n_min", c.bench.n_min}, {"n_max", c.bench.n_max}, {"repeats", c.bench.repeats}}},
      {"gaussian",
       {{"ports", c.gaussian.ports},
        {"photons", c.gaussian.photons},
        {"trials", c.gaussian.trials},
        {"random_phases", c.gaussian.random_phases}}},
      {"unitary_file", c.unitary_file},
      {"output_dir", c.output_dir},
  };
}

ExperimentConfig config_from_json(const nlohmann::json& input) {
  const json& j = input.contains("config") && input.contains("config_hash")
                      ? input.at("config")
                      : input;
  ExperimentConfig c;
  ObjectReader top(j, "");
  top.read("photons", c.photons);
  top.read("ports", c.ports);
  top.read("multiplier", c.multiplier);
  if (const json* s = top.child("source")) {
    ObjectReader r(*s, "source");
    r.read("gamma", c.source.squeezing);
    r.read("k", c.source.inner_modes);
    std::string flavor(to_string(c.source.flavor));
    r.read("flavor", flavor);
    c.source.flavor = flavor_from_string(flavor);
    r.read("feed_forward", c.source.feed_forward);
    r.read("strict_single_pair", c.source.strict_single_pair);
    r.finish();
  }
  if (const json* g = top.child("grid")) {
    ObjectReader r(*g, "grid");
    r.read("base", c.grid.base);
    r.read("spacing", c.grid.spacing);
    r.read("common", c.grid.common);
    r.read("bandwidth", c.grid.bandwidth);
    r.finish();
  }
  top.read("bins_per_envelope", c.bins_per_envelope);
  top.read("epsilon", c.epsilon);
  std::string policy(to_string(c.resolution_policy));
  top.read("resolution_policy", policy);
  c.resolution_policy = resolution_policy_from_string(policy);
  top.read("trials", c.trials);
  top.read("seed", c.seed);
  if (const json* l = top.child("limits")) {
    ObjectReader r(*l, "limits");
    r.read("naive_max_order", c.permanent_limits.naive_max_order);
    r.read("fast_max_order", c.permanent_limits.fast_max_order);
    r.read("brute_force_photons", c.brute_force_limits.max_photons);
    r.read("brute_force_ports", c.brute_force_limits.max_ports);
    r.read("brute_force_bins", c.brute_force_limits.max_bins);
    r.finish();
  }
  if (const json* v = top.child("curve")) {
    ObjectReader r(*v, "curve");
    r.read("n_min", c.curve.n_min);
    r.read("n_max", c.curve.n_max);
    r.finish();
  }
  if (const json* b = top.child("bench")) {
    ObjectReader r(*b, "bench");
    r.read("n_min", c.bench.n_min);
    r.read("n_max", c.bench.n_max);
    r.read("repeats", c.bench.repeats);
    r.finish();
  }
  if (const json* g = top.child("gaussian")) {
    ObjectReader r(*g, "gaussian");
    r.read("ports", c.gaussian.ports);
    r.read("photons", c.gaussian.photons);
    r.read("trials", c.gaussian.trials);
    r.read("random_phases", c.gaussian.random_phases);
    r.finish();
  }
  top.read("unitary_file", c.unitary_file);
  top.read("output_dir", c.output_dir);
  top.finish();
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw DomainError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

std::string config_hash(const ExperimentConfig& config) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(fnv1a64(without_output(config).dump())));
  return hex;
}

}  // namespace smbcs
