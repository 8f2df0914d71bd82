#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "smbcs/correlations.hpp"
#include "smbcs/errors.hpp"
#include "smbcs/permanent.hpp"

using namespace smbcs;
using Catch::Approx;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

SpectralMode rfm(double w, double t0 = 0.0, double dw = 1.0) {
  return SpectralMode(w, t0, dw, SpectralShape::RectangularTemporal);
}

SpectralMode rtm(double t, double w0 = 0.0, double dw = 1.0) {
  return SpectralMode(w0, t, dw, SpectralShape::RectangularFrequency);
}

}  // namespace

TEST_CASE("time resolution validator") {
  const InputConfiguration same{{0, rfm(5.0, 0.0, 0.1)}, {1, rfm(5.0, 0.0, 0.1)}};
  auto r = check_time_resolution(same, 0.1, 0.05);
  CHECK(r.max_ratio == Approx(0.01));
  CHECK(r.satisfied);

  const InputConfiguration split{{0, rfm(0.0, 0.0, 1e9)}, {1, rfm(kTwoPi * 1e10, 0.0, 1e9)}};
  r = check_time_resolution(split, 10e-12, 0.05);
  CHECK(r.max_ratio == Approx(0.6283185307).epsilon(1e-9));
  CHECK_FALSE(r.satisfied);
  CHECK(r.worst_pair == std::pair<std::size_t, std::size_t>{0, 1});

  r = check_time_resolution(split, 1e-30, 0.05);
  CHECK(r.max_ratio < 1e-15);
  CHECK(r.satisfied);
  CHECK_THROWS_AS(check_time_resolution(split, 0.0, 0.05), DomainError);
}

TEST_CASE("frequency resolution validator") {
  const InputConfiguration same{{0, rtm(0.0, 0.0, 100.0)}, {1, rtm(0.0, 0.0, 100.0)}};
  auto r = check_frequency_resolution(same, 1.0, 0.05);
  CHECK(r.max_ratio == Approx(0.01));
  CHECK(r.satisfied);

  const InputConfiguration split{{0, rtm(0.0, 0.0, 1e12)}, {1, rtm(100e-12, 0.0, 1e12)}};
  r = check_frequency_resolution(split, kTwoPi * 1e9, 0.05);
  CHECK(r.max_ratio == Approx(0.6283185307).epsilon(1e-9));
  CHECK_FALSE(r.satisfied);

  r = check_frequency_resolution(split, 1e-30, 0.05);
  CHECK(r.satisfied);
}

TEST_CASE("single photon probabilities are |U|^2 spread over bins") {
  const auto u = haar_random(4, 3);
  for (auto domain : {ResolvedDomain::Time, ResolvedDomain::Frequency}) {
    const InputConfiguration in{
        {2, domain == ResolvedDomain::Time ? rfm(0.7) : rtm(0.4)}};
    const double w = 0.25;
    const auto grid = make_detection_grid(in, domain, w);
    REQUIRE(grid.bin_count() == 4);
    double total = 0.0;
    for (std::size_t d = 0; d < 4; ++d) {
      double port_total = 0.0;
      for (std::size_t b = 0; b < 4; ++b) {
        const DetectionOutcome out{domain, {d}, {b}, grid};
        const double p = outcome_probability(u, in, out, {ResolutionPolicy::Permissive, 10.0});
        CHECK(p == Approx(std::norm(u(d, 2)) * w).margin(1e-15));
        port_total += p;
      }
      CHECK(port_total == Approx(std::norm(u(d, 2))).margin(1e-14));
      total += port_total;
    }
    CHECK(std::abs(total - 1.0) < 1e-9);
  }
}

TEST_CASE("time-resolved matrix reduces to the phase matrix") {
  const auto u = haar_random(5, 8);
  const InputConfiguration in{{0, rfm(1.0, 0.0, 2.0)}, {3, rfm(2.5, 0.0, 2.0)},
                              {4, rfm(-0.5, 0.0, 2.0)}};
  const auto grid = make_detection_grid(in, ResolvedDomain::Time, 0.1);
  const DetectionOutcome out{ResolvedDomain::Time, {1, 1, 4}, {0, 3, 2}, grid};
  const auto a = amplitude_matrix(u, in, out);
  const auto t = out.resolved_values();
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const Complex phase =
          u(out.ports[i], in[j].port) * std::polar(1.0, in[j].mode.central_frequency() * t[i]);
      CHECK(std::abs(a(i, j) - std::sqrt(2.0) * phase) < 1e-14);
    }
}

TEST_CASE("detection outside every support gives zero") {
  const auto u = haar_random(3, 9);
  const InputConfiguration in{{0, rtm(0.0)}, {1, rtm(0.3)}};
  // Grid extends one band beyond the supports.
  const DetectionGrid wide(-0.5, 0.25, 8);
  const DetectionOutcome out{ResolvedDomain::Frequency, {0, 2}, {1, 6}, wide};
  const auto a = amplitude_matrix(u, in, out);
  CHECK(a(1, 0) == Complex(0.0));
  CHECK(a(1, 1) == Complex(0.0));
  CHECK(perm_fast(a) == Complex(0.0));
  CHECK(outcome_probability(u, in, out, {ResolutionPolicy::Permissive, 10.0}) == 0.0);
}

TEST_CASE("Hong-Ou-Mandel null on a balanced coupler") {
  const auto c = balanced_coupler();
  for (auto domain : {ResolvedDomain::Time, ResolvedDomain::Frequency}) {
    const auto mode = domain == ResolvedDomain::Time ? rfm(3.0) : rtm(0.0, 3.0);
    const InputConfiguration in{{0, mode}, {1, mode}};
    const auto grid = make_detection_grid(in, domain, 0.5);
    for (std::size_t b = 0; b < grid.bin_count(); ++b) {
      const DetectionOutcome out{domain, {0, 1}, {b, b}, grid};
      CHECK(outcome_probability(c, in, out) <= 1e-12);
    }
    // All weight sits on bunched outcomes.
    CHECK(std::abs(testing::ordered_total(c, in, domain, 0.5) - 1.0) < 1e-12);
  }
}

TEST_CASE("probabilities sum to one over all outcomes") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> spread(-3.0, 3.0);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::size_t m = 3; m <= 6; ++m) {
      if (n == 3 && m > 4) continue;  // larger cases live in the acceptance suite
      const auto u = haar_random(m, 100 * n + m);
      for (auto domain : {ResolvedDomain::Time, ResolvedDomain::Frequency}) {
        InputConfiguration in;
        for (std::size_t s = 0; s < n; ++s) {
          in.push_back({s, domain == ResolvedDomain::Time ? rfm(spread(gen)) : rtm(spread(gen))});
        }
        CHECK(std::abs(testing::ordered_total(u, in, domain, 0.5) - 1.0) < 1e-6);
      }
    }
  }
}

TEST_CASE("normalization with shifted supports and shared ports") {
  const auto u = haar_random(4, 31);
  const double w = 0.5;
  // Time windows starting one bin apart.
  const InputConfiguration shifted{{0, rfm(0.3, 0.0)}, {2, rfm(-1.1, 0.5)}};
  CHECK(std::abs(testing::ordered_total(u, shifted, ResolvedDomain::Time, w) - 1.0) < 1e-12);

  // Two identical photons in one port, a third elsewhere.
  const InputConfiguration twin{{1, rtm(0.2)}, {1, rtm(0.2)}, {3, rtm(-0.7)}};
  CHECK(std::abs(testing::ordered_total(u, twin, ResolvedDomain::Frequency, w) - 1.0) < 1e-12);

  // Two different inner modes in one port.
  const InputConfiguration mixed{{0, rfm(0.0)}, {0, rfm(2.0)}, {2, rfm(1.0)}};
  CHECK(std::abs(testing::ordered_total(u, mixed, ResolvedDomain::Time, w) - 1.0) < 1e-12);
  CHECK(input_state_norm(mixed, make_detection_grid(mixed, ResolvedDomain::Time, w),
                         ResolvedDomain::Time) > 1.0);
  CHECK(input_state_norm(twin, make_detection_grid(twin, ResolvedDomain::Frequency, w),
                         ResolvedDomain::Frequency) == Approx(2.0));
}

TEST_CASE("time and frequency paths are dual") {
  std::mt19937_64 gen(41);
  std::uniform_real_distribution<double> value(-4.0, 4.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto u = haar_random(5, 500 + trial);
    InputConfiguration time_in, freq_in;
    for (std::size_t s = 0; s < 3; ++s) {
      const double x = value(gen);
      time_in.push_back({s, rfm(x, 0.0, 1.0)});
      freq_in.push_back({s, rtm(x, 0.5, 1.0)});
    }
    const auto tg = make_detection_grid(time_in, ResolvedDomain::Time, 0.25);
    const auto fg = make_detection_grid(freq_in, ResolvedDomain::Frequency, 0.25);
    REQUIRE(tg == fg);
    const PortSet ports{0, 2, 4};
    const std::vector<std::size_t> bins{static_cast<std::size_t>(trial % 4), 1, 3};
    const DetectionOutcome to{ResolvedDomain::Time, ports, bins, tg};
    const DetectionOutcome fo{ResolvedDomain::Frequency, ports, bins, fg};
    const auto at = amplitude_matrix(u, time_in, to);
    const auto af = amplitude_matrix(u, freq_in, fo);
    CHECK(at == af);
    const double pt = std::norm(perm_fast(at));
    const double pf = std::norm(perm_fast(af));
    CHECK(pt == pf);
  }
}

TEST_CASE("input phases leave probabilities unchanged") {
  std::mt19937_64 gen(51);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  const auto u = haar_random(4, 52);
  ComplexMatrix shifted = u.matrix();
  for (std::size_t s = 0; s < 4; ++s) {
    const Complex ph = std::polar(1.0, phase(gen));
    for (std::size_t d = 0; d < 4; ++d) shifted(d, s) *= ph;
  }
  const Interferometer v(shifted);
  const InputConfiguration in{{0, rfm(0.4)}, {1, rfm(-1.3)}, {3, rfm(2.2)}};
  const auto grid = make_detection_grid(in, ResolvedDomain::Time, 0.5);
  ProbabilityOptions quiet;
  quiet.verify_resolution = false;
  for (std::size_t k = 0; k < 40; ++k) {
    const DetectionOutcome out{ResolvedDomain::Time, {k % 4, (k / 4) % 4, 3}, {k % 2, 0, 1},
                               grid};
    const double p = outcome_probability(u, in, out, quiet);
    const double q = outcome_probability(v, in, out, quiet);
    CHECK(std::abs(p - q) <= 1e-12 * std::max(p, 1e-300));
  }
}

TEST_CASE("distinguishable photons follow the classical permanent") {
  const auto u = haar_random(5, 61);
  for (auto domain : {ResolvedDomain::Time, ResolvedDomain::Frequency}) {
    // Disjoint supports, one per photon, one bin each.
    InputConfiguration in;
    for (std::size_t s = 0; s < 3; ++s) {
      const double offset = static_cast<double>(s);
      in.push_back({s, domain == ResolvedDomain::Time ? rfm(0.0, offset) : rtm(0.0, offset)});
    }
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j) CHECK(mode_overlap(in[i].mode, in[j].mode) == Complex(0.0));
    const auto grid = make_detection_grid(in, domain, 1.0);
    REQUIRE(grid.bin_count() == 3);

    ProbabilityOptions quiet;
    quiet.verify_resolution = false;
    const PortSet ports{0, 2, 3};
    double coincidence = 0.0;
    for (std::size_t b0 = 0; b0 < 3; ++b0)
      for (std::size_t b1 = 0; b1 < 3; ++b1)
        for (std::size_t b2 = 0; b2 < 3; ++b2) {
          const DetectionOutcome out{domain, ports, {b0, b1, b2}, grid};
          coincidence += outcome_probability(u, in, out, quiet);
        }
    std::vector<std::vector<double>> classical(3, std::vector<double>(3));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) classical[i][j] = std::norm(u(ports[i], j));
    CHECK(std::abs(coincidence - testing::real_permanent(classical)) < 1e-9);
  }
}

TEST_CASE("resolution policy") {
  const auto u = haar_random(3, 71);
  const InputConfiguration in{{0, rfm(0.0)}, {1, rfm(3.0)}};
  const auto grid = make_detection_grid(in, ResolvedDomain::Time, 0.5);
  const DetectionOutcome out{ResolvedDomain::Time, {0, 1}, {0, 1}, grid};
  CHECK_THROWS_AS(outcome_probability(u, in, out, {ResolutionPolicy::Strict, 0.05}),
                  ResolutionViolation);
  testing::WarningCapture capture;
  CHECK_NOTHROW(outcome_probability(u, in, out, {ResolutionPolicy::Permissive, 0.05}));
  CHECK(capture.messages.size() == 1);
  CHECK_NOTHROW(outcome_probability(u, in, out, {ResolutionPolicy::Strict, 2.0}));
  CHECK(resolution_policy_from_string("strict") == ResolutionPolicy::Strict);
  CHECK_THROWS_AS(resolution_policy_from_string("lenient"), DomainError);
}

TEST_CASE("grid construction and outcome validation") {
  const InputConfiguration in{{0, rfm(0.0)}, {1, rfm(1.0)}};
  CHECK_THROWS_AS(make_detection_grid(in, ResolvedDomain::Time, 0.3), DomainError);
  CHECK_THROWS_AS(make_detection_grid(in, ResolvedDomain::Frequency, 0.5), DomainError);
  const InputConfiguration misaligned{{0, rfm(0.0, 0.0)}, {1, rfm(0.0, 0.1)}};
  CHECK_THROWS_AS(make_detection_grid(misaligned, ResolvedDomain::Time, 0.5), DomainError);
  const InputConfiguration widths{{0, rfm(0.0, 0.0, 1.0)}, {1, rfm(0.0, 0.0, 2.0)}};
  CHECK_THROWS_AS(make_detection_grid(widths, ResolvedDomain::Time, 0.5), DomainError);

  const auto u = haar_random(3, 81);
  const auto grid = make_detection_grid(in, ResolvedDomain::Time, 0.5);
  CHECK_THROWS_AS(amplitude_matrix(u, in, {ResolvedDomain::Time, {0}, {0}, grid}), DomainError);
  CHECK_THROWS_AS(amplitude_matrix(u, in, {ResolvedDomain::Time, {0, 3}, {0, 0}, grid}),
                  DomainError);
  CHECK_THROWS_AS(amplitude_matrix(u, in, {ResolvedDomain::Time, {0, 1}, {0, 2}, grid}),
                  DomainError);

  const DetectionOutcome bunched{ResolvedDomain::Time, {0, 0, 1, 0}, {1, 1, 0, 0}, grid};
  CHECK(bunching_divisor(bunched) == 2.0);
}
