#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "smbcs/correlations.hpp"
#include "smbcs/permanent.hpp"
#include "smbcs/sampler.hpp"
#include "smbcs/scattershot.hpp"
#include "smbcs/sources.hpp"

namespace smbcs {

/// Inner-mode grid parameters. RFM: values are frequencies base + j*spacing
/// and `common` is the shared start time. RTM: values are times
/// base + j*spacing (spacing = 1/f_p) and `common` is the shared frequency.
struct GridConfig {
  double base = 0.0;
  double spacing = 1.0;
  double common = 0.0;
  double bandwidth = 1.0;
};

struct CurveConfig {
  std::size_t n_min = 1;
  std::size_t n_max = 200;
};

struct BenchConfig {
  std::size_t n_min = 1;
  std::size_t n_max = 20;
  std::size_t repeats = 3;
};

struct GaussianConfig {
  std::size_t ports = 100;
  std::size_t photons = 5;
  std::uint64_t trials = 10000;
  bool random_phases = true;
};

/// Everything a run depends on. Defaults reproduce the a = 1.2, k = 8,
/// gamma = 1/sqrt(2) feed-forward configuration.
struct ExperimentConfig {
  std::size_t photons = 3;
  std::size_t ports = 0;  ///< 0: one port per source
  double multiplier = 1.2;
  SpdcSource source{0.7071067811865476, 8, Flavor::RFM, true, true};
  GridConfig grid;
  std::size_t bins_per_envelope = 2;
  double epsilon = kDefaultResolutionEpsilon;
  ResolutionPolicy resolution_policy = ResolutionPolicy::Permissive;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  PermanentLimits permanent_limits;
  BruteForceLimits brute_force_limits;
  CurveConfig curve;
  BenchConfig bench;
  GaussianConfig gaussian;
  std::string unitary_file;  ///< empty: Haar-random from the master seed
  std::string output_dir;    ///< not part of the hash

  /// Throws DomainError describing the first invalid field.
  void validate() const;

  ExperimentPlan plan() const { return {photons, multiplier, source}; }
  std::size_t port_count() const;
  InnerModeGrid inner_mode_grid() const;
  SamplerConfig sampler_config() const;
  ProbabilityOptions probability_options() const;
};

nlohmann::json to_json(const ExperimentConfig& config);

/// Missing keys keep their defaults; unknown keys are rejected. A run
/// manifest is accepted too (its "config" member is used).
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// 16 hex digits of FNV-1a over the canonical JSON (output_dir excluded).
std::string config_hash(const ExperimentConfig& config);

}  // namespace smbcs
