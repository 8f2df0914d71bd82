#pragma once

// Exact detection probabilities for photons with rectangular inner-mode
// envelopes in a linear interferometer, resolved either in time or in
// frequency at the detectors.
//
// Detection model. The resolved axis is cut into equal half-open bins of width
// `bin_width` (dt or dw). A detection event is a (port, bin) pair and the
// resolved value is the bin centre. With amplitude matrix
//
//   frequency-resolved:  A_ij = U_{d_i s_j} xi(w_{d_i} - w_{s_j}) e^{+i w_{d_i} t_{s_j}}
//   time-resolved:       A_ij = U_{d_i s_j} chi(t_{d_i} - t_{s_j}) e^{+i w_{s_j} t_{d_i}}
//
// (xi = 1/sqrt(dw) on the band, chi = sqrt(dw) on the window [t_s, t_s + 1/dw))
// an outcome with N photons has probability
//
//   P = bin_width^N |perm A|^2 / (prod_b m_b! * norm(inputs))
//
// where m_b counts photons sharing one (port, bin) and norm(inputs) is the
// squared norm of the input Fock state: 1 for photons in distinct ports, n! for
// n identical photons in one port, and in general the permanent of the input
// Gram matrix on the detection grid. For equal envelope factors this is
// dw^N Dw^-N |perm[U e^{i w_d t_s}]|^2 (frequency) and
// dt^N Dw^N |perm[U e^{i w_s t_d}]|^2 (time). Whenever every input support is
// tiled by grid bins the probabilities over all outcomes sum to one exactly.

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "smbcs/errors.hpp"
#include "smbcs/interferometer.hpp"
#include "smbcs/spectra.hpp"

namespace smbcs {

enum class ResolvedDomain { Time, Frequency };

std::string_view to_string(ResolvedDomain domain);
ResolvedDomain resolved_domain_from_string(std::string_view name);

/// Spectral shape an input photon must carry for a given detection domain.
SpectralShape required_shape(ResolvedDomain domain);

struct InputPhoton {
  std::size_t port;
  SpectralMode mode;

  bool operator==(const InputPhoton&) const = default;
};

/// Occupied input ports with their inner modes. A port may appear several
/// times (multi-photon emission of one source).
using InputConfiguration = std::vector<InputPhoton>;

/// Equal half-open bins [origin + b w, origin + (b + 1) w), b < bin_count.
class DetectionGrid {
 public:
  DetectionGrid(double origin, double bin_width, std::size_t bin_count);

  double origin() const { return origin_; }
  double bin_width() const { return bin_width_; }
  std::size_t bin_count() const { return bin_count_; }
  double center(std::size_t bin) const;

  bool operator==(const DetectionGrid&) const = default;

 private:
  double origin_;
  double bin_width_;
  std::size_t bin_count_;
};

/// Grid spanning the union of the input supports. Requires a common bandwidth
/// and every support edge to fall on a bin edge.
DetectionGrid make_detection_grid(const InputConfiguration& inputs,
                                  ResolvedDomain domain, double bin_width);

struct DetectionOutcome {
  ResolvedDomain domain;
  PortSet ports;
  std::vector<std::size_t> bins;
  DetectionGrid grid;

  std::size_t photon_count() const { return ports.size(); }
  double bin_width() const { return grid.bin_width(); }
  std::vector<double> resolved_values() const;
};

inline constexpr double kDefaultResolutionEpsilon = 0.05;

struct ResolutionReport {
  double max_ratio = 0.0;
  bool satisfied = true;
  /// Photons responsible for max_ratio; equal indices when the bandwidth term
  /// dominates.
  std::pair<std::size_t, std::size_t> worst_pair{0, 0};
};

/// max(dt |w_s - w_s'|, dt Dw) against epsilon.
ResolutionReport check_time_resolution(const InputConfiguration& inputs, double dt,
                                       double epsilon = kDefaultResolutionEpsilon);

/// max(dw |t_s - t_s'|, dw / Dw) against epsilon.
ResolutionReport check_frequency_resolution(const InputConfiguration& inputs,
                                            double dw,
                                            double epsilon = kDefaultResolutionEpsilon);

ResolutionReport check_resolution(const InputConfiguration& inputs,
                                  ResolvedDomain domain, double bin_width,
                                  double epsilon = kDefaultResolutionEpsilon);

enum class ResolutionPolicy { Strict, Permissive };

std::string_view to_string(ResolutionPolicy policy);
ResolutionPolicy resolution_policy_from_string(std::string_view name);

/// Raised in strict mode when detector resolution is too coarse.
class ResolutionViolation : public DomainError {
 public:
  using DomainError::DomainError;
};

struct ProbabilityOptions {
  ResolutionPolicy policy = ResolutionPolicy::Permissive;
  double epsilon = kDefaultResolutionEpsilon;
  /// Skip the resolution check (callers that already ran it once).
  bool verify_resolution = true;
};

/// The |outcome| x |inputs| matrix whose permanent gives the detection
/// amplitude; repeated (port, bin) events give repeated rows, identical
/// photons give repeated columns.
ComplexMatrix amplitude_matrix(const Interferometer& interferometer,
                               const InputConfiguration& inputs,
                               const DetectionOutcome& outcome);

/// Squared norm of the input Fock state (permanent of the Gram matrix of the
/// input photons on the detection grid).
double input_state_norm(const InputConfiguration& inputs, const DetectionGrid& grid,
                        ResolvedDomain domain);

/// prod over distinct (port, bin) events of (multiplicity)!.
double bunching_divisor(const DetectionOutcome& outcome);

struct OutcomeEvaluation {
  double probability = 0.0;
  double perm_modulus = 0.0;
};

OutcomeEvaluation evaluate_outcome(const Interferometer& interferometer,
                                   const InputConfiguration& inputs,
                                   const DetectionOutcome& outcome,
                                   const ProbabilityOptions& options = {});

double outcome_probability(const Interferometer& interferometer,
                           const InputConfiguration& inputs,
                           const DetectionOutcome& outcome,
                           const ProbabilityOptions& options = {});

}  // namespace smbcs
