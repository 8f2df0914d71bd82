#include "smbcs/sources.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "smbcs/errors.hpp"

namespace smbcs {

std::string_view to_string(Flavor flavor) {
  return flavor == Flavor::RFM ? "rfm" : "rtm";
}

Flavor flavor_from_string(std::string_view name) {
  if (name == "rfm" || name == "RFM") return Flavor::RFM;
  if (name == "rtm" || name == "RTM") return Flavor::RTM;
  throw DomainError("unknown flavor '" + std::string(name) + "'");
}

void SpdcSource::validate() const {
  if (!(squeezing >= 0.0 && squeezing < 1.0)) {
    throw DomainError("SpdcSource: squeezing must lie in [0, 1)");
  }
  if (inner_modes == 0) throw DomainError("SpdcSource: need at least one inner mode");
}

double pair_number_probability(double squeezing, std::uint64_t n) {
  if (!(squeezing >= 0.0 && squeezing < 1.0)) {
    throw DomainError("pair_number_probability: squeezing must lie in [0, 1)");
  }
  const double g2 = squeezing * squeezing;
  return (1.0 - g2) * std::pow(g2, static_cast<double>(n));
}

double single_photon_probability(const SpdcSource& source) {
  source.validate();
  if (!source.feed_forward) {
    throw DomainError(
        "single_photon_probability needs feed-forward; use at_least_one_probability");
  }
  if (!source.strict_single_pair) return at_least_one_probability(source);
  const double g2 = source.squeezing * source.squeezing;
  const double p1 = (1.0 - g2) * g2;
  return 1.0 - std::pow(1.0 - p1, static_cast<double>(source.inner_modes));
}

double at_least_one_probability(const SpdcSource& source) {
  source.validate();
  const double g2 = source.squeezing * source.squeezing;
  return 1.0 - std::pow(1.0 - g2, static_cast<double>(source.inner_modes));
}

double delivery_probability(const SpdcSource& source) {
  return source.feed_forward ? single_photon_probability(source)
                             : at_least_one_probability(source);
}

double squeezing_for_at_least_one(double probability, std::size_t inner_modes) {
  if (!(probability >= 0.0 && probability < 1.0) || inner_modes == 0) {
    throw DomainError("squeezing_for_at_least_one: need p in [0, 1) and k >= 1");
  }
  const double vacuum = std::pow(1.0 - probability, 1.0 / static_cast<double>(inner_modes));
  return std::sqrt(1.0 - vacuum);
}

double optimal_squeezing() { return 1.0 / std::numbers::sqrt2; }

EmissionRecord emit(const SpdcSource& source, Philox& rng) {
  source.validate();
  const double g2 = source.squeezing * source.squeezing;
  EmissionRecord record;
  record.pairs_per_inner_mode.reserve(source.inner_modes);
  std::vector<std::size_t> qualifying;
  std::uint64_t total = 0;
  const bool exactly_one = source.feed_forward && source.strict_single_pair;
  for (std::size_t j = 0; j < source.inner_modes; ++j) {
    const std::uint64_t n = geometric(rng, g2);
    record.pairs_per_inner_mode.push_back(n);
    total += n;
    if (exactly_one ? n == 1 : n >= 1) qualifying.push_back(j);
  }
  if (!qualifying.empty()) {
    record.heralded_mode_index = qualifying[uniform_index(rng, qualifying.size())];
  }
  if (source.feed_forward) {
    record.delivered_photons = qualifying.empty() ? 0 : 1;
  } else {
    record.delivered_photons = total;
  }
  return record;
}

InnerModeGrid rfm_grid(std::size_t k, double base_frequency, double spacing,
                       double start_time, double bandwidth) {
  if (k == 0 || !(bandwidth > 0.0)) throw DomainError("rfm_grid: need k >= 1, Dw > 0");
  InnerModeGrid grid{{}, start_time, bandwidth};
  for (std::size_t j = 0; j < k; ++j) {
    grid.values.push_back(base_frequency + static_cast<double>(j) * spacing);
  }
  return grid;
}

InnerModeGrid rtm_grid(std::size_t k, double first_time, double repetition_rate,
                       double central_frequency, double bandwidth) {
  if (k == 0 || !(bandwidth > 0.0) || !(repetition_rate > 0.0)) {
    throw DomainError("rtm_grid: need k >= 1, f_p > 0, Dw > 0");
  }
  InnerModeGrid grid{{}, central_frequency, bandwidth};
  for (std::size_t j = 0; j < k; ++j) {
    grid.values.push_back(first_time + static_cast<double>(j) / repetition_rate);
  }
  return grid;
}

SpectralMode inner_mode(Flavor flavor, const InnerModeGrid& grid, std::size_t index) {
  if (index >= grid.size()) throw DomainError("inner_mode: index outside the grid");
  if (flavor == Flavor::RFM) {
    return SpectralMode(grid.values[index], grid.common_value, grid.bandwidth,
                        SpectralShape::RectangularTemporal);
  }
  return SpectralMode(grid.common_value, grid.values[index], grid.bandwidth,
                      SpectralShape::RectangularFrequency);
}

SpectralMode assign_inner_mode(const EmissionRecord& record, Flavor flavor,
                               const InnerModeGrid& grid) {
  if (!record.heralded_mode_index) {
    throw DomainError("assign_inner_mode: emission has no herald");
  }
  return inner_mode(flavor, grid, *record.heralded_mode_index);
}

std::size_t max_inner_modes(Flavor flavor, double dt, double dw,
                            std::optional<double> repetition_rate, double epsilon) {
  if (!(dw > 0.0) || !(epsilon > 0.0)) {
    throw DomainError("max_inner_modes: resolutions and epsilon must be > 0");
  }
  const double dnu = dw / (2.0 * std::numbers::pi);
  double bound;
  if (flavor == Flavor::RTM && repetition_rate) {
    if (!(*repetition_rate > 0.0)) throw DomainError("max_inner_modes: f_p must be > 0");
    bound = *repetition_rate / dnu;
  } else {
    if (!(dt > 0.0)) throw DomainError("max_inner_modes: dt must be > 0");
    bound = 1.0 / (dt * dnu);
  }
  // Relative slack so that exact products such as 0.05 * 100 floor to 5.
  return static_cast<std::size_t>(std::floor(epsilon * bound * (1.0 + 1e-12)));
}

}  // namespace smbcs
