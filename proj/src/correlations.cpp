#include "smbcs/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "smbcs/permanent.hpp"

namespace smbcs {

namespace {

constexpr double kGridAlignmentTolerance = 1e-6;
constexpr std::size_t kMaxGridBins = std::size_t{1} << 20;
constexpr double kProbabilityTolerance = 1e-9;

bool near_integer(double x) { return std::abs(x - std::round(x)) <= kGridAlignmentTolerance; }

// Envelope-times-carrier factor of photon `mode` at resolved value `value`.
Complex detection_amplitude(const SpectralMode& mode, ResolvedDomain domain,
                            double value) {
  if (domain == ResolvedDomain::Frequency) return frequency_amplitude(mode, value);
  // Phase-matrix convention e^{+i w_s t_d}: the conjugate of the wave packet.
  return std::conj(temporal_amplitude(mode, value));
}

void require_shapes(const InputConfiguration& inputs, ResolvedDomain domain) {
  const SpectralShape shape = required_shape(domain);
  for (const auto& photon : inputs) {
    if (photon.mode.shape() != shape) {
      throw DomainError(std::string(to_string(domain)) +
                        "-resolved detection needs input modes of shape " +
                        std::string(to_string(shape)));
    }
  }
}

void validate_outcome(const Interferometer& interferometer,
                      const InputConfiguration& inputs, const DetectionOutcome& outcome) {
  if (inputs.empty()) throw DomainError("no input photons");
  if (outcome.ports.size() != inputs.size()) {
    throw DomainError("outcome has " + std::to_string(outcome.ports.size()) +
                      " detections for " + std::to_string(inputs.size()) + " photons");
  }
  if (outcome.bins.size() != outcome.ports.size()) {
    throw DomainError("outcome: |ports| != |bins|");
  }
  const std::size_t m = interferometer.dimension();
  for (std::size_t i = 0; i < outcome.ports.size(); ++i) {
    if (outcome.ports[i] >= m) throw DomainError("outcome port index >= M");
    if (outcome.bins[i] >= outcome.grid.bin_count()) {
      throw DomainError("outcome bin index outside the detection grid");
    }
  }
  for (const auto& photon : inputs) {
    if (photon.port >= m) throw DomainError("input port index >= M");
  }
  require_shapes(inputs, outcome.domain);
}

// Indices of first occurrences and multiplicities of equal elements.
template <typename T>
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> group_equal(
    const std::vector<T>& items) {
  std::vector<std::size_t> representatives, counts;
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto it = std::find_if(representatives.begin(), representatives.end(),
                           [&](std::size_t r) { return items[r] == items[i]; });
    if (it == representatives.end()) {
      representatives.push_back(i);
      counts.push_back(1);
    } else {
      ++counts[static_cast<std::size_t>(it - representatives.begin())];
    }
  }
  return {representatives, counts};
}

double factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

}  // namespace

std::string_view to_string(ResolvedDomain domain) {
  return domain == ResolvedDomain::Time ? "time" : "frequency";
}

ResolvedDomain resolved_domain_from_string(std::string_view name) {
  if (name == "time") return ResolvedDomain::Time;
  if (name == "frequency") return ResolvedDomain::Frequency;
  throw DomainError("unknown resolved domain '" + std::string(name) + "'");
}

SpectralShape required_shape(ResolvedDomain domain) {
  return domain == ResolvedDomain::Frequency ? SpectralShape::RectangularFrequency
                                             : SpectralShape::RectangularTemporal;
}

std::string_view to_string(ResolutionPolicy policy) {
  return policy == ResolutionPolicy::Strict ? "strict" : "permissive";
}

ResolutionPolicy resolution_policy_from_string(std::string_view name) {
  if (name == "strict") return ResolutionPolicy::Strict;
  if (name == "permissive") return ResolutionPolicy::Permissive;
  throw DomainError("unknown resolution policy '" + std::string(name) + "'");
}

DetectionGrid::DetectionGrid(double origin, double bin_width, std::size_t bin_count)
    : origin_(origin), bin_width_(bin_width), bin_count_(bin_count) {
  if (!std::isfinite(origin) || !(bin_width > 0.0) || !std::isfinite(bin_width)) {
    throw DomainError("DetectionGrid: need finite origin and bin width > 0");
  }
  if (bin_count == 0) throw DomainError("DetectionGrid: need at least one bin");
}

double DetectionGrid::center(std::size_t bin) const {
  return origin_ + (static_cast<double>(bin) + 0.5) * bin_width_;
}

DetectionGrid make_detection_grid(const InputConfiguration& inputs,
                                  ResolvedDomain domain, double bin_width) {
  if (inputs.empty()) throw DomainError("make_detection_grid: no input photons");
  if (!(bin_width > 0.0)) throw DomainError("make_detection_grid: bin width must be > 0");
  require_shapes(inputs, domain);
  const double bandwidth = inputs.front().mode.bandwidth();
  double lo = inputs.front().mode.support_begin();
  double hi = inputs.front().mode.support_end();
  for (const auto& photon : inputs) {
    if (std::abs(photon.mode.bandwidth() - bandwidth) > 1e-12 * bandwidth) {
      throw DomainError("make_detection_grid: input photons must share one bandwidth");
    }
    lo = std::min(lo, photon.mode.support_begin());
    hi = std::max(hi, photon.mode.support_end());
  }
  const double support_width =
      domain == ResolvedDomain::Frequency ? bandwidth : 1.0 / bandwidth;
  if (!near_integer(support_width / bin_width)) {
    throw DomainError("make_detection_grid: bin width does not divide the envelope width");
  }
  for (const auto& photon : inputs) {
    if (!near_integer((photon.mode.support_begin() - lo) / bin_width)) {
      throw DomainError("make_detection_grid: input support does not start on a bin edge");
    }
  }
  const double bins = std::round((hi - lo) / bin_width);
  if (bins > static_cast<double>(kMaxGridBins)) {
    throw GuardExceeded("make_detection_grid: more than 2^20 bins");
  }
  return DetectionGrid(lo, bin_width, static_cast<std::size_t>(bins));
}

std::vector<double> DetectionOutcome::resolved_values() const {
  std::vector<double> values(bins.size());
  std::transform(bins.begin(), bins.end(), values.begin(),
                 [this](std::size_t b) { return grid.center(b); });
  return values;
}

ResolutionReport check_time_resolution(const InputConfiguration& inputs, double dt,
                                       double epsilon) {
  if (!(dt > 0.0)) throw DomainError("check_time_resolution: dt must be > 0");
  ResolutionReport report;
  for (std::size_t s = 0; s < inputs.size(); ++s) {
    const double own = dt * inputs[s].mode.bandwidth();
    if (own > report.max_ratio) report = {own, true, {s, s}};
    for (std::size_t r = s + 1; r < inputs.size(); ++r) {
      const double ratio = dt * std::abs(inputs[s].mode.central_frequency() -
                                         inputs[r].mode.central_frequency());
      if (ratio > report.max_ratio) report = {ratio, true, {s, r}};
    }
  }
  report.satisfied = report.max_ratio <= epsilon;
  return report;
}

ResolutionReport check_frequency_resolution(const InputConfiguration& inputs,
                                            double dw, double epsilon) {
  if (!(dw > 0.0)) throw DomainError("check_frequency_resolution: dw must be > 0");
  ResolutionReport report;
  for (std::size_t s = 0; s < inputs.size(); ++s) {
    const double own = dw / inputs[s].mode.bandwidth();
    if (own > report.max_ratio) report = {own, true, {s, s}};
    for (std::size_t r = s + 1; r < inputs.size(); ++r) {
      const double ratio = dw * std::abs(inputs[s].mode.central_time() -
                                         inputs[r].mode.central_time());
      if (ratio > report.max_ratio) report = {ratio, true, {s, r}};
    }
  }
  report.satisfied = report.max_ratio <= epsilon;
  return report;
}

ResolutionReport check_resolution(const InputConfiguration& inputs,
                                  ResolvedDomain domain, double bin_width,
                                  double epsilon) {
  return domain == ResolvedDomain::Time
             ? check_time_resolution(inputs, bin_width, epsilon)
             : check_frequency_resolution(inputs, bin_width, epsilon);
}

ComplexMatrix amplitude_matrix(const Interferometer& interferometer,
                               const InputConfiguration& inputs,
                               const DetectionOutcome& outcome) {
  validate_outcome(interferometer, inputs, outcome);
  const std::size_t n = inputs.size();
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double value = outcome.grid.center(outcome.bins[i]);
    for (std::size_t j = 0; j < n; ++j) {
      a(i, j) = interferometer(outcome.ports[i], inputs[j].port) *
                detection_amplitude(inputs[j].mode, outcome.domain, value);
    }
  }
  return a;
}

double input_state_norm(const InputConfiguration& inputs, const DetectionGrid& grid,
                        ResolvedDomain domain) {
  // Photons in different ports are orthogonal through the unitarity of U, so
  // the Gram matrix is block diagonal over ports.
  PortSet ports;
  for (const auto& photon : inputs) ports.push_back(photon.port);
  std::sort(ports.begin(), ports.end());
  ports.erase(std::unique(ports.begin(), ports.end()), ports.end());

  double norm = 1.0;
  for (std::size_t port : ports) {
    std::vector<const SpectralMode*> modes;
    for (const auto& photon : inputs)
      if (photon.port == port) modes.push_back(&photon.mode);
    if (modes.size() == 1) continue;
    ComplexMatrix gram(modes.size(), modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i)
      for (std::size_t j = 0; j < modes.size(); ++j) {
        if (*modes[i] == *modes[j]) {
          gram(i, j) = 1.0;
          continue;
        }
        Complex sum{};
        for (std::size_t b = 0; b < grid.bin_count(); ++b) {
          const double value = grid.center(b);
          sum += std::conj(detection_amplitude(*modes[i], domain, value)) *
                 detection_amplitude(*modes[j], domain, value);
        }
        gram(i, j) = grid.bin_width() * sum;
      }
    norm *= perm_fast(gram).real();
  }
  return norm;
}

double bunching_divisor(const DetectionOutcome& outcome) {
  std::vector<std::pair<std::size_t, std::size_t>> events;
  for (std::size_t i = 0; i < outcome.ports.size(); ++i) {
    events.emplace_back(outcome.ports[i], outcome.bins[i]);
  }
  double divisor = 1.0;
  for (std::size_t count : group_equal(events).second) divisor *= factorial(count);
  return divisor;
}

OutcomeEvaluation evaluate_outcome(const Interferometer& interferometer,
                                   const InputConfiguration& inputs,
                                   const DetectionOutcome& outcome,
                                   const ProbabilityOptions& options) {
  validate_outcome(interferometer, inputs, outcome);
  if (options.verify_resolution) {
    const auto report =
        check_resolution(inputs, outcome.domain, outcome.bin_width(), options.epsilon);
    if (!report.satisfied) {
      std::ostringstream msg;
      msg << to_string(outcome.domain) << " resolution ratio " << report.max_ratio
          << " exceeds epsilon " << options.epsilon << " (photons "
          << report.worst_pair.first << ", " << report.worst_pair.second << ")";
      if (options.policy == ResolutionPolicy::Strict) throw ResolutionViolation(msg.str());
      warn(msg.str());
    }
  }

  // Collapse repeated detection events and identical photons into a base
  // matrix with multiplicities.
  std::vector<std::pair<std::size_t, std::size_t>> events;
  for (std::size_t i = 0; i < outcome.ports.size(); ++i) {
    events.emplace_back(outcome.ports[i], outcome.bins[i]);
  }
  const auto [row_reps, row_mult] = group_equal(events);
  const auto [col_reps, col_mult] = group_equal(inputs);

  ComplexMatrix base(row_reps.size(), col_reps.size());
  for (std::size_t i = 0; i < row_reps.size(); ++i) {
    const auto [port, bin] = events[row_reps[i]];
    const double value = outcome.grid.center(bin);
    for (std::size_t j = 0; j < col_reps.size(); ++j) {
      const InputPhoton& photon = inputs[col_reps[j]];
      base(i, j) = interferometer(port, photon.port) *
                   detection_amplitude(photon.mode, outcome.domain, value);
    }
  }
  const Complex perm = perm_with_multiplicities(base, row_mult, col_mult);

  double divisor = 1.0;
  for (std::size_t m : row_mult) divisor *= factorial(m);
  divisor *= input_state_norm(inputs, outcome.grid, outcome.domain);

  const double n = static_cast<double>(inputs.size());
  const double modulus = std::abs(perm);
  const double probability =
      std::pow(outcome.bin_width(), n) * modulus * modulus / divisor;
  if (!std::isfinite(probability) || probability < 0.0 ||
      probability > 1.0 + kProbabilityTolerance) {
    throw NumericAssertion("outcome probability " + std::to_string(probability) +
                           " outside [0, 1]");
  }
  return {probability, modulus};
}

double outcome_probability(const Interferometer& interferometer,
                           const InputConfiguration& inputs,
                           const DetectionOutcome& outcome,
                           const ProbabilityOptions& options) {
  return evaluate_outcome(interferometer, inputs, outcome, options).probability;
}

}  // namespace smbcs
