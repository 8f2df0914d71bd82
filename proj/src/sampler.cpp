#include "smbcs/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>

#include "smbcs/errors.hpp"

namespace smbcs {

namespace {

// Calls visit(sequence) for every nondecreasing sequence of `length` values
// drawn from [0, alphabet).
template <typename Visitor>
void for_each_multiset(std::size_t alphabet, std::size_t length, Visitor&& visit) {
  std::vector<std::size_t> seq(length, 0);
  for (;;) {
    visit(seq);
    std::size_t pos = length;
    while (pos > 0 && seq[pos - 1] + 1 == alphabet) --pos;
    if (pos == 0) return;
    const std::size_t next = seq[pos - 1] + 1;
    std::fill(seq.begin() + static_cast<std::ptrdiff_t>(pos - 1), seq.end(), next);
  }
}

QuadratureMoments moments(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double m2 = 0.0, m4 = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m4 /= n;
  return {mean, m2, m4 / (m2 * m2) - 3.0};
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

DetectionOutcome OutcomeDistribution::outcome(std::size_t entry) const {
  const auto& e = entries.at(entry);
  return DetectionOutcome{domain, e.ports, e.bins, grid};
}

OutcomeDistribution brute_force_distribution(const Interferometer& interferometer,
                                             const InputConfiguration& inputs,
                                             ResolvedDomain domain, double bin_width,
                                             const BruteForceLimits& limits,
                                             const ProbabilityOptions& options) {
  if (inputs.empty()) throw DomainError("brute_force_distribution: no input photons");
  if (inputs.size() > limits.max_photons) {
    throw GuardExceeded("brute_force_distribution: " + std::to_string(inputs.size()) +
                        " photons exceed the limit of " +
                        std::to_string(limits.max_photons));
  }
  if (interferometer.dimension() > limits.max_ports) {
    throw GuardExceeded("brute_force_distribution: M = " +
                        std::to_string(interferometer.dimension()) +
                        " exceeds the limit of " + std::to_string(limits.max_ports));
  }
  const DetectionGrid grid = make_detection_grid(inputs, domain, bin_width);
  if (grid.bin_count() > limits.max_bins) {
    throw GuardExceeded("brute_force_distribution: " + std::to_string(grid.bin_count()) +
                        " bins exceed the limit of " + std::to_string(limits.max_bins));
  }

  OutcomeDistribution dist{domain, grid, {}, 0.0, {}};
  dist.resolution = check_resolution(inputs, domain, bin_width, options.epsilon);
  if (!dist.resolution.satisfied) {
    std::ostringstream msg;
    msg << to_string(domain) << " resolution ratio " << dist.resolution.max_ratio
        << " exceeds epsilon " << options.epsilon;
    if (options.policy == ResolutionPolicy::Strict) throw ResolutionViolation(msg.str());
    warn(msg.str());
  }

  ProbabilityOptions unchecked = options;
  unchecked.verify_resolution = false;
  const std::size_t bins = grid.bin_count();
  const std::size_t alphabet = interferometer.dimension() * bins;
  for_each_multiset(alphabet, inputs.size(), [&](const std::vector<std::size_t>& seq) {
    OutcomeEntry entry;
    for (std::size_t mode : seq) {
      entry.ports.push_back(mode / bins);
      entry.bins.push_back(mode % bins);
    }
    const auto eval = evaluate_outcome(
        interferometer, inputs, DetectionOutcome{domain, entry.ports, entry.bins, grid},
        unchecked);
    entry.probability = eval.probability;
    entry.perm_modulus = eval.perm_modulus;
    dist.entries.push_back(std::move(entry));
  });
  for (const auto& e : dist.entries) dist.total += e.probability;
  return dist;
}

std::size_t sample_outcome_index(const OutcomeDistribution& distribution, Philox& rng) {
  if (distribution.entries.empty() || !(distribution.total > 0.0)) {
    throw NumericAssertion("sample_outcome_index: distribution has no mass");
  }
  const double target = uniform01(rng) * distribution.total;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < distribution.entries.size(); ++i) {
    cumulative += distribution.entries[i].probability;
    if (target < cumulative) return i;
  }
  // Rounding left target at the very top; return the last entry with mass.
  for (std::size_t i = distribution.entries.size(); i-- > 0;) {
    if (distribution.entries[i].probability > 0.0) return i;
  }
  return distribution.entries.size() - 1;
}

double total_variation_distance(std::span<const std::uint64_t> counts,
                                std::span<const double> probabilities) {
  if (counts.size() != probabilities.size()) {
    throw DomainError("total_variation_distance: size mismatch");
  }
  const double n =
      static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
  if (!(n > 0.0)) throw DomainError("total_variation_distance: no samples");
  double l1 = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    l1 += std::abs(static_cast<double>(counts[i]) / n - probabilities[i]);
  }
  return 0.5 * l1;
}

ResolvedDomain detection_domain(Flavor flavor) {
  return flavor == Flavor::RFM ? ResolvedDomain::Time : ResolvedDomain::Frequency;
}

double SamplerConfig::bin_width(Flavor flavor) const {
  if (bins_per_envelope == 0) throw DomainError("SamplerConfig: need at least one bin");
  const double envelope = flavor == Flavor::RFM ? 1.0 / grid.bandwidth : grid.bandwidth;
  return envelope / static_cast<double>(bins_per_envelope);
}

std::string_view to_string(SampleStatus status) {
  switch (status) {
    case SampleStatus::Complete:
      return "complete";
    case SampleStatus::Failed:
      return "failed";
    case SampleStatus::Unsampled:
      return "unsampled";
  }
  return "unknown";
}

Sampler::Sampler(ExperimentPlan plan, Interferometer interferometer, SamplerConfig config,
                 std::uint64_t seed)
    : plan_(std::move(plan)),
      interferometer_(std::move(interferometer)),
      config_(std::move(config)),
      seed_(seed) {
  plan_.validate();
  if (interferometer_.dimension() < plan_.sources()) {
    throw DomainError("Sampler: interferometer has " +
                      std::to_string(interferometer_.dimension()) + " ports for " +
                      std::to_string(plan_.sources()) + " sources");
  }
  if (config_.grid.size() != plan_.source.inner_modes) {
    throw DomainError("Sampler: inner-mode grid size differs from k");
  }
}

const OutcomeDistribution& Sampler::distribution_for(const InputConfiguration& inputs,
                                                     const std::vector<std::size_t>& modes) {
  std::vector<std::pair<std::size_t, std::size_t>> key;
  for (std::size_t i = 0; i < inputs.size(); ++i) key.emplace_back(inputs[i].port, modes[i]);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    const Flavor flavor = plan_.source.flavor;
    it = cache_
             .emplace(key, brute_force_distribution(
                               interferometer_, inputs, detection_domain(flavor),
                               config_.bin_width(flavor), config_.limits,
                               config_.probability))
             .first;
  }
  return it->second;
}

SampleRecord Sampler::draw(std::uint64_t index) {
  auto rng = Philox::for_stream(seed_, "simulate", index);
  const std::size_t sources = plan_.sources();
  const SpdcSource& source = plan_.source;

  SampleRecord record;
  record.index = index;
  record.seed = seed_;

  std::vector<EmissionRecord> emissions;
  emissions.reserve(sources);
  for (std::size_t s = 0; s < sources; ++s) emissions.push_back(emit(source, rng));

  std::size_t delivering = 0;
  for (std::size_t s = 0; s < sources; ++s) {
    const auto& e = emissions[s];
    record.emitted_photons += std::accumulate(e.pairs_per_inner_mode.begin(),
                                              e.pairs_per_inner_mode.end(), std::uint64_t{0});
    if (e.delivered_photons == 0) continue;
    if (source.feed_forward) {
      // Feed-forward admits only the N lowest-index delivering sources.
      if (delivering < plan_.photons) {
        record.input_ports.push_back(s);
        record.inner_mode_indices.push_back(*e.heralded_mode_index);
      }
    } else {
      for (std::size_t j = 0; j < e.pairs_per_inner_mode.size(); ++j) {
        for (std::uint64_t c = 0; c < e.pairs_per_inner_mode[j]; ++c) {
          record.input_ports.push_back(s);
          record.inner_mode_indices.push_back(j);
        }
      }
    }
    ++delivering;
  }
  for (std::size_t j : record.inner_mode_indices) {
    record.inner_modes.push_back(inner_mode(source.flavor, config_.grid, j));
  }
  record.n_total = record.input_ports.size();

  if (delivering < plan_.photons) {
    record.status = SampleStatus::Failed;
    return record;
  }
  const BruteForceLimits& limits = config_.limits;
  if (record.n_total > limits.max_photons ||
      interferometer_.dimension() > limits.max_ports ||
      config_.bins_per_envelope > limits.max_bins) {
    record.status = SampleStatus::Unsampled;
    return record;
  }

  InputConfiguration inputs;
  for (std::size_t i = 0; i < record.n_total; ++i) {
    inputs.push_back({record.input_ports[i], record.inner_modes[i]});
  }
  const OutcomeDistribution& dist = distribution_for(inputs, record.inner_mode_indices);
  const std::size_t pick = sample_outcome_index(dist, rng);
  record.outcome = dist.outcome(pick);
  record.probability = dist.entries[pick].probability;
  record.perm_modulus = dist.entries[pick].perm_modulus;
  record.status = SampleStatus::Complete;
  return record;
}

SampleRecord draw_sample(const ExperimentPlan& plan, const Interferometer& interferometer,
                         const SamplerConfig& config, std::uint64_t seed,
                         std::uint64_t index) {
  Sampler sampler(plan, interferometer, config, seed);
  return sampler.draw(index);
}

GaussianEntryReport gaussian_entry_diagnostics(std::size_t ports, std::size_t photons,
                                               std::size_t inner_modes,
                                               std::uint64_t trials, std::uint64_t seed,
                                               bool random_phases) {
  if (photons == 0 || photons > ports || inner_modes == 0 || trials == 0) {
    throw DomainError("gaussian_entry_diagnostics: need 1 <= N <= M, k >= 1, trials >= 1");
  }
  GaussianEntryReport report;
  report.ports = ports;
  report.photons = photons;
  report.inner_modes = inner_modes;
  report.trials = trials;
  report.random_phases = random_phases;
  report.below_recommended_ports = ports < photons * photons;
  if (report.below_recommended_ports) {
    warn("gaussian_entry_diagnostics: M < N^2, entries are not expected to look Gaussian");
  }

  const double scale = std::sqrt(static_cast<double>(ports));
  std::vector<double> re, im, row_a, row_b, col_a, col_b, mod_a, mod_b;
  const std::size_t per_trial = photons * photons;
  re.reserve(trials * per_trial);
  im.reserve(trials * per_trial);

  ComplexMatrix z(photons, photons);
  std::vector<double> omega(photons), times(photons);
  for (std::uint64_t t = 0; t < trials; ++t) {
    auto rng = Philox::for_stream(seed, "diagnose-gaussian", t);
    const ComplexMatrix u = haar_random_isometry(ports, photons, rng);
    for (std::size_t s = 0; s < photons; ++s) {
      omega[s] = random_phases ? static_cast<double>(uniform_index(rng, inner_modes)) : 0.0;
    }
    for (std::size_t d = 0; d < photons; ++d) {
      times[d] = random_phases ? 2.0 * std::numbers::pi * uniform01(rng) : 0.0;
    }
    for (std::size_t d = 0; d < photons; ++d)
      for (std::size_t s = 0; s < photons; ++s) {
        z(d, s) = scale * u(d, s) * std::polar(1.0, omega[s] * times[d]);
        re.push_back(z(d, s).real());
        im.push_back(z(d, s).imag());
      }
    if (photons >= 2) {
      for (std::size_t d = 0; d + 1 < photons; ++d) {
        row_a.push_back(z(d, 0).real());
        row_b.push_back(z(d, 1).real());
        col_a.push_back(z(d, 0).real());
        col_b.push_back(z(d + 1, 0).real());
        mod_a.push_back(std::norm(z(d, 0)));
        mod_b.push_back(std::norm(z(d, 1)));
      }
    }
  }
  report.samples = re.size();
  report.real = moments(re);
  report.imag = moments(im);
  report.re_im_correlation = pearson(re, im);
  report.max_abs_correlation = std::abs(report.re_im_correlation);
  if (photons >= 2) {
    report.row_correlation = pearson(row_a, row_b);
    report.column_correlation = pearson(col_a, col_b);
    report.modulus_row_correlation = pearson(mod_a, mod_b);
    for (double c : {report.row_correlation, report.column_correlation,
                     report.modulus_row_correlation}) {
      report.max_abs_correlation = std::max(report.max_abs_correlation, std::abs(c));
    }
  }
  report.kurtosis_gaussian =
      std::abs(report.real.excess_kurtosis) <= kGaussianKurtosisTolerance &&
      std::abs(report.imag.excess_kurtosis) <= kGaussianKurtosisTolerance;
  return report;
}

}  // namespace smbcs
