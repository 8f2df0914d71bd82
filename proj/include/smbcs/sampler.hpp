#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "smbcs/correlations.hpp"
#include "smbcs/interferometer.hpp"
#include "smbcs/scattershot.hpp"
#include "smbcs/sources.hpp"

namespace smbcs {

struct OutcomeEntry {
  PortSet ports;                  ///< nondecreasing
  std::vector<std::size_t> bins;  ///< bin of each detection, paired with ports
  double probability = 0.0;
  double perm_modulus = 0.0;
};

/// Every (port, bin) multiset of the photons with its probability.
struct OutcomeDistribution {
  ResolvedDomain domain;
  DetectionGrid grid;
  std::vector<OutcomeEntry> entries;
  double total = 0.0;
  ResolutionReport resolution;

  DetectionOutcome outcome(std::size_t entry) const;
};

/// Cost guard for exhaustive enumeration.
struct BruteForceLimits {
  std::size_t max_photons = 3;
  std::size_t max_ports = 6;
  std::size_t max_bins = 12;
};

/// Enumerates all multisets of (port, bin) detection events; the resolution
/// check runs once (policy as in `options`).
OutcomeDistribution brute_force_distribution(const Interferometer& interferometer,
                                             const InputConfiguration& inputs,
                                             ResolvedDomain domain, double bin_width,
                                             const BruteForceLimits& limits = {},
                                             const ProbabilityOptions& options = {});

/// Inverse-CDF draw from the (renormalized) distribution.
std::size_t sample_outcome_index(const OutcomeDistribution& distribution, Philox& rng);

/// Half the L1 distance between empirical counts and reference probabilities.
double total_variation_distance(std::span<const std::uint64_t> counts,
                                std::span<const double> probabilities);

/// Detection domain paired with each multiplexing flavor.
ResolvedDomain detection_domain(Flavor flavor);

struct SamplerConfig {
  InnerModeGrid grid;
  /// Bins per envelope width (window 1/Dw for RFM, band Dw for RTM).
  std::size_t bins_per_envelope = 2;
  BruteForceLimits limits;
  ProbabilityOptions probability;

  double bin_width(Flavor flavor) const;
};

enum class SampleStatus {
  Complete,   ///< inputs realized and an output outcome drawn
  Failed,     ///< fewer than N delivering sources
  Unsampled,  ///< inputs realized but beyond the exact-sampling guard
};

std::string_view to_string(SampleStatus status);

struct SampleRecord {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  SampleStatus status = SampleStatus::Failed;
  PortSet input_ports;
  std::vector<std::size_t> inner_mode_indices;
  std::vector<SpectralMode> inner_modes;
  std::size_t n_total = 0;           ///< photons injected (= |input_ports|)
  std::uint64_t emitted_photons = 0; ///< all signal photons of the bank
  std::optional<DetectionOutcome> outcome;
  double probability = 0.0;
  double perm_modulus = 0.0;
};

/// End-to-end sample generation. Source i feeds input port i; sample `index`
/// uses stream (seed, "simulate", index) so records reproduce individually.
class Sampler {
 public:
  Sampler(ExperimentPlan plan, Interferometer interferometer, SamplerConfig config,
          std::uint64_t seed);

  SampleRecord draw(std::uint64_t index);

  const ExperimentPlan& plan() const { return plan_; }
  const Interferometer& interferometer() const { return interferometer_; }
  const SamplerConfig& config() const { return config_; }

 private:
  const OutcomeDistribution& distribution_for(const InputConfiguration& inputs,
                                              const std::vector<std::size_t>& modes);

  ExperimentPlan plan_;
  Interferometer interferometer_;
  SamplerConfig config_;
  std::uint64_t seed_;
  std::map<std::vector<std::pair<std::size_t, std::size_t>>, OutcomeDistribution> cache_;
};

/// One-shot convenience wrapper around Sampler::draw.
SampleRecord draw_sample(const ExperimentPlan& plan, const Interferometer& interferometer,
                         const SamplerConfig& config, std::uint64_t seed,
                         std::uint64_t index);

struct QuadratureMoments {
  double mean = 0.0;
  double variance = 0.0;
  double excess_kurtosis = 0.0;
};

struct GaussianEntryReport {
  std::size_t ports = 0;
  std::size_t photons = 0;
  std::size_t inner_modes = 0;
  std::uint64_t trials = 0;
  std::uint64_t samples = 0;
  bool random_phases = true;
  QuadratureMoments real;
  QuadratureMoments imag;
  double re_im_correlation = 0.0;
  double row_correlation = 0.0;        ///< Re z_{d,s} vs Re z_{d,s+1}
  double column_correlation = 0.0;     ///< Re z_{d,s} vs Re z_{d+1,s}
  double modulus_row_correlation = 0.0;  ///< |z_{d,s}|^2 vs |z_{d,s+1}|^2
  double max_abs_correlation = 0.0;
  bool kurtosis_gaussian = true;  ///< |excess kurtosis| <= kGaussianKurtosisTolerance
  bool below_recommended_ports = false;  ///< M < N^2
};

inline constexpr double kGaussianKurtosisTolerance = 0.1;

/// Moments of sqrt(M) U_{ds} e^{i w_s t_d} over N x N blocks of Haar-random
/// unitaries, with w_s on a k-point unit grid and t_d uniform on [0, 2pi).
GaussianEntryReport gaussian_entry_diagnostics(std::size_t ports, std::size_t photons,
                                               std::size_t inner_modes,
                                               std::uint64_t trials, std::uint64_t seed,
                                               bool random_phases = true);

}  // namespace smbcs
