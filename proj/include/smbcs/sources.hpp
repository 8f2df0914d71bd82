#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "smbcs/rng.hpp"
#include "smbcs/spectra.hpp"

namespace smbcs {

/// Random inner-mode multiplexing flavor. RFM heralds a random central
/// frequency (photons then detected time-resolved); RTM heralds a random
/// time slot (photons then detected frequency-resolved).
enum class Flavor { RFM, RTM };

std::string_view to_string(Flavor flavor);
Flavor flavor_from_string(std::string_view name);

/// Heralded SPDC source with k inner modes (frequency bins or pump pulses).
struct SpdcSource {
  double squeezing = 0.0;        ///< gamma in [0, 1)
  std::size_t inner_modes = 1;   ///< k >= 1
  Flavor flavor = Flavor::RFM;
  bool feed_forward = true;
  /// With feed-forward, deliver only from inner modes that produced exactly
  /// one pair (number-resolved heralding). Off: ideal blocking also turns
  /// multi-pair heralds into one delivered photon.
  bool strict_single_pair = true;

  /// Throws DomainError on gamma outside [0, 1) or k == 0.
  void validate() const;
};

struct EmissionRecord {
  std::vector<std::uint64_t> pairs_per_inner_mode;
  std::optional<std::size_t> heralded_mode_index;
  std::uint64_t delivered_photons = 0;
};

/// (1 - gamma^2) gamma^{2n}.
double pair_number_probability(double squeezing, std::uint64_t n);

/// Feed-forward single-photon probability. Strict single-pair heralding:
/// 1 - (1 - (1 - gamma^2) gamma^2)^k. Ideal blocking of multi-pair heralds:
/// same as at_least_one_probability. Requires feed_forward.
double single_photon_probability(const SpdcSource& source);

/// 1 - (1 - gamma^2)^k.
double at_least_one_probability(const SpdcSource& source);

/// Probability that the source counts as "delivering" for the success
/// criterion: single_photon_probability with feed-forward, otherwise
/// at_least_one_probability.
double delivery_probability(const SpdcSource& source);

/// gamma such that 1 - (1 - gamma^2)^k = p.
double squeezing_for_at_least_one(double probability, std::size_t inner_modes);

/// 1/sqrt(2), the maximiser of single_photon_probability for every k.
double optimal_squeezing();

/// One pump cycle: k independent pair numbers, the herald, and the number of
/// photons passed to the interferometer.
///
/// The herald is drawn uniformly among the qualifying inner modes (exactly one
/// pair under strict single-pair feed-forward, at least one pair otherwise).
/// With feed-forward at most one photon is delivered; without it every signal
/// photon is.
EmissionRecord emit(const SpdcSource& source, Philox& rng);

/// Central values of the k inner modes plus the shared conjugate value.
struct InnerModeGrid {
  std::vector<double> values;  ///< RFM: frequencies (rad/s); RTM: times (s)
  double common_value = 0.0;   ///< RFM: shared time; RTM: shared frequency
  double bandwidth = 1.0;      ///< photon bandwidth Dw (rad/s)

  std::size_t size() const { return values.size(); }
};

/// k frequencies w0 + j * spacing, photons starting at t0.
InnerModeGrid rfm_grid(std::size_t k, double base_frequency, double spacing,
                       double start_time, double bandwidth);

/// k pulse slots t0 + j / f_p, photons centred on w0.
InnerModeGrid rtm_grid(std::size_t k, double first_time, double repetition_rate,
                       double central_frequency, double bandwidth);

/// Mode for inner-mode index `index` of `grid`: RectangularTemporal for RFM,
/// RectangularFrequency for RTM.
SpectralMode inner_mode(Flavor flavor, const InnerModeGrid& grid, std::size_t index);

/// Mode of the heralded photon. Throws DomainError without a herald.
SpectralMode assign_inner_mode(const EmissionRecord& record, Flavor flavor,
                               const InnerModeGrid& grid);

/// Largest usable number of inner modes, floor(epsilon * bound):
///   RFM:          bound = 1 / (dt dnu)
///   RTM, pulsed:  bound = f_p / dnu
///   RTM, cw:      bound = 1 / (dt dnu)  (no repetition rate given)
/// with dnu = dw / 2pi the resolution in cycles per second.
std::size_t max_inner_modes(Flavor flavor, double dt, double dw,
                            std::optional<double> repetition_rate,
                            double epsilon = 0.05);

}  // namespace smbcs
