#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "smbcs/sources.hpp"

namespace smbcs {

/// ceil(a N), tolerant to representation error in a (1.2 * 10 -> 12, not 13).
std::size_t source_count(std::size_t photons, double multiplier);

/// Target of N photons drawn from ceil(a N) identical sources.
struct ExperimentPlan {
  std::size_t photons = 1;
  double multiplier = 1.0;
  SpdcSource source;

  std::size_t sources() const { return source_count(photons, multiplier); }
  void validate() const;
};

/// Regularized incomplete beta I_x(a, b) by Lentz continued fraction, using
/// the I_x(a, b) = 1 - I_{1-x}(b, a) reflection for convergence.
double regularized_incomplete_beta(double x, double a, double b);

/// sum_{j=k}^{n} C(n, j) p^j (1-p)^{n-j}, term-wise in log space.
double binomial_upper_tail(std::size_t trials, std::size_t at_least, double p);

/// P(at least N of ceil(aN) sources deliver) = I_p(N, ceil(aN) - N + 1) with
/// p = delivery_probability(source). Zero (with a warning) if ceil(aN) < N.
double success_probability_analytic(const ExperimentPlan& plan);

/// Same quantity for an explicit per-source probability p.
double success_probability(std::size_t photons, std::size_t sources, double p);

struct McEstimate {
  double probability = 0.0;
  double standard_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
};

/// Simulates the source bank `trials` times with emit(); trial i uses stream
/// (seed, "success-prob", i).
McEstimate success_probability_mc(const ExperimentPlan& plan, std::uint64_t trials,
                                  std::uint64_t seed);

/// 1 / delivery_probability(source): for a above this value the success
/// probability tends to one with N.
double asymptotic_threshold(const SpdcSource& source);

struct PhotonStatistics {
  double mean = 0.0;
  double std_dev = 0.0;
};

/// Total emitted photons of ceil(aN) sources over k inner modes:
/// mean ceil(aN) k g^2/(1-g^2), std sqrt(ceil(aN) k) g/(1-g^2).
PhotonStatistics total_photon_statistics(const ExperimentPlan& plan);

/// Total photons emitted by one realization of the bank (all pairs in all
/// inner modes, feed-forward ignored).
std::uint64_t sample_total_photons(const ExperimentPlan& plan, Philox& rng);

struct CurvePoint {
  std::size_t photons;
  double probability;
};

struct SuccessCurve {
  double multiplier = 1.0;
  SpdcSource source;
  std::vector<CurvePoint> points;
};

SuccessCurve success_curve(double multiplier, const SpdcSource& source,
                           std::size_t n_min = 1, std::size_t n_max = 200);

}  // namespace smbcs
