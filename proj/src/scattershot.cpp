#include "smbcs/scattershot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "smbcs/errors.hpp"

namespace smbcs {

namespace {

constexpr int kMaxContinuedFractionTerms = 10000;
constexpr double kContinuedFractionEpsilon = 1e-16;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b), modified Lentz evaluation.
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxContinuedFractionTerms; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kContinuedFractionEpsilon) return h;
  }
  throw NumericAssertion("regularized_incomplete_beta: continued fraction did not converge");
}

}  // namespace

std::size_t source_count(std::size_t photons, double multiplier) {
  if (!(multiplier > 0.0) || !std::isfinite(multiplier)) {
    throw DomainError("source_count: multiplier must be finite and > 0");
  }
  const double exact = multiplier * static_cast<double>(photons);
  return static_cast<std::size_t>(std::ceil(exact - 1e-9 * std::max(1.0, exact)));
}

void ExperimentPlan::validate() const {
  if (photons == 0) throw DomainError("ExperimentPlan: need N >= 1");
  if (!(multiplier > 0.0)) throw DomainError("ExperimentPlan: need a > 0");
  source.validate();
}

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete beta: need a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete beta: need x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double binomial_upper_tail(std::size_t trials, std::size_t at_least, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binomial_upper_tail: p outside [0, 1]");
  if (at_least == 0) return 1.0;
  if (at_least > trials) return 0.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  const double n = static_cast<double>(trials);
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double log_n_fact = std::lgamma(n + 1.0);
  double sum = 0.0;
  for (std::size_t j = at_least; j <= trials; ++j) {
    const double k = static_cast<double>(j);
    const double log_term = log_n_fact - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                            k * log_p + (n - k) * log_q;
    sum += std::exp(log_term);
  }
  return sum;
}

double success_probability(std::size_t photons, std::size_t sources, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("success_probability: p outside [0, 1]");
  if (photons == 0) return 1.0;
  if (sources < photons) {
    warn("success_probability: " + std::to_string(sources) + " sources cannot deliver " +
         std::to_string(photons) + " photons");
    return 0.0;
  }
  return regularized_incomplete_beta(p, static_cast<double>(photons),
                                     static_cast<double>(sources - photons + 1));
}

double success_probability_analytic(const ExperimentPlan& plan) {
  plan.validate();
  return success_probability(plan.photons, plan.sources(),
                             delivery_probability(plan.source));
}

McEstimate success_probability_mc(const ExperimentPlan& plan, std::uint64_t trials,
                                  std::uint64_t seed) {
  plan.validate();
  if (trials == 0) throw DomainError("success_probability_mc: need trials >= 1");
  const std::size_t sources = plan.sources();
  McEstimate estimate;
  estimate.trials = trials;
  for (std::uint64_t t = 0; t < trials; ++t) {
    auto rng = Philox::for_stream(seed, "success-prob", t);
    std::size_t delivering = 0;
    for (std::size_t s = 0; s < sources; ++s) {
      if (emit(plan.source, rng).delivered_photons >= 1) ++delivering;
    }
    if (delivering >= plan.photons) ++estimate.successes;
  }
  const double n = static_cast<double>(trials);
  estimate.probability = static_cast<double>(estimate.successes) / n;
  estimate.standard_error =
      std::sqrt(estimate.probability * (1.0 - estimate.probability) / n);
  return estimate;
}

double asymptotic_threshold(const SpdcSource& source) {
  const double p = delivery_probability(source);
  if (!(p > 0.0)) throw DomainError("asymptotic_threshold: delivery probability is zero");
  return 1.0 / p;
}

PhotonStatistics total_photon_statistics(const ExperimentPlan& plan) {
  plan.validate();
  const double g2 = plan.source.squeezing * plan.source.squeezing;
  const double modes =
      static_cast<double>(plan.sources()) * static_cast<double>(plan.source.inner_modes);
  return {modes * g2 / (1.0 - g2), std::sqrt(modes) * plan.source.squeezing / (1.0 - g2)};
}

std::uint64_t sample_total_photons(const ExperimentPlan& plan, Philox& rng) {
  plan.validate();
  const double g2 = plan.source.squeezing * plan.source.squeezing;
  const std::size_t draws = plan.sources() * plan.source.inner_modes;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < draws; ++i) total += geometric(rng, g2);
  return total;
}

SuccessCurve success_curve(double multiplier, const SpdcSource& source,
                           std::size_t n_min, std::size_t n_max) {
  if (n_min == 0 || n_max < n_min) throw DomainError("success_curve: need 1 <= n_min <= n_max");
  SuccessCurve curve{multiplier, source, {}};
  for (std::size_t n = n_min; n <= n_max; ++n) {
    curve.points.push_back(
        {n, success_probability_analytic(ExperimentPlan{n, multiplier, source})});
  }
  return curve;
}

}  // namespace smbcs
