#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "smbcs/errors.hpp"
#include "smbcs/spectra.hpp"

using namespace smbcs;
using Catch::Approx;

namespace {

SpectralMode freq_mode(double w, double t, double dw) {
  return SpectralMode(w, t, dw, SpectralShape::RectangularFrequency);
}

SpectralMode time_mode(double w, double t, double dw) {
  return SpectralMode(w, t, dw, SpectralShape::RectangularTemporal);
}

}  // namespace

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(freq_mode(0, 0, 0), DomainError);
  CHECK_THROWS_AS(freq_mode(0, 0, -1), DomainError);
  CHECK_THROWS_AS(freq_mode(NAN, 0, 1), DomainError);
  CHECK_THROWS_AS(time_mode(0, INFINITY, 1), DomainError);
}

TEST_CASE("frequency amplitude values") {
  const double w0 = 3.0;
  const auto m = freq_mode(w0, 0.0, 1.0);
  CHECK(frequency_amplitude(m, w0) == Complex(1.0, 0.0));
  CHECK(frequency_amplitude(m, w0 + 0.6) == Complex(0.0, 0.0));
  CHECK_THROWS_AS(frequency_amplitude(time_mode(0, 0, 1), 0.0), DomainError);

  const auto shifted = freq_mode(w0, 0.7, 1.0);
  const Complex v = frequency_amplitude(shifted, w0 + 0.2);
  CHECK(std::arg(v) == Approx(std::remainder((w0 + 0.2) * 0.7, 2 * std::numbers::pi)));
}

TEST_CASE("temporal amplitude values") {
  const auto m = time_mode(5.0, 0.0, 2.0);
  CHECK(std::abs(temporal_amplitude(m, 0.25)) == Approx(std::sqrt(2.0)));
  CHECK(temporal_amplitude(m, 0.6) == Complex(0.0, 0.0));
  CHECK(temporal_amplitude(m, 0.5) == Complex(0.0, 0.0));
  CHECK(std::abs(temporal_amplitude(m, 0.0)) > 0.0);
  CHECK_THROWS_AS(temporal_amplitude(freq_mode(0, 0, 1), 0.0), DomainError);
}

TEST_CASE("envelopes are unit normalized") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> centre(-20.0, 20.0), width(0.1, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double w = centre(gen), t = centre(gen), dw = width(gen);
    const auto f = freq_mode(w, t, dw);
    const double nf = testing::integrate(
        [&](double x) { return std::norm(frequency_amplitude(f, x)); }, w - dw, w + dw,
        400000);
    CHECK(std::abs(nf - 1.0) < 1e-9);

    const auto g = time_mode(w, t, dw);
    const double nt = testing::integrate(
        [&](double x) { return std::norm(temporal_amplitude(g, x)); }, t - 1.0 / dw,
        t + 2.0 / dw, 300000);
    CHECK(std::abs(nt - 1.0) < 1e-9);
  }
}

TEST_CASE("mode overlap examples") {
  const auto a = freq_mode(0.0, 0.0, 1.0);
  CHECK(std::abs(mode_overlap(a, a) - 1.0) < 1e-15);
  CHECK(std::abs(mode_overlap(a, freq_mode(1.0, 0.0, 1.0))) == 0.0);
  CHECK(std::abs(mode_overlap(a, freq_mode(1.5, 0.0, 1.0))) == 0.0);
  CHECK(std::abs(mode_overlap(a, freq_mode(0.5, 0.0, 1.0))) == Approx(0.5).margin(1e-15));
  CHECK_THROWS_AS(mode_overlap(a, time_mode(0, 0, 1)), DomainError);

  const auto b = time_mode(2.0, 0.0, 1.0);
  CHECK(std::abs(mode_overlap(b, time_mode(2.0, 1.0, 1.0))) == 0.0);
  CHECK(std::abs(mode_overlap(b, time_mode(2.0, 0.5, 1.0))) == Approx(0.5).margin(1e-15));
}

TEST_CASE("mode overlap matches quadrature and is bounded by one") {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> centre(-1.0, 1.0), width(0.5, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    const double dw = width(gen);
    const auto fa = freq_mode(centre(gen), 3 * centre(gen), dw);
    const auto fb = freq_mode(centre(gen), 3 * centre(gen), dw);
    const auto integrand = [&](auto part) {
      return [&, part](double x) {
        return part(std::conj(frequency_amplitude(fa, x)) * frequency_amplitude(fb, x));
      };
    };
    const double re = testing::integrate(integrand([](Complex z) { return z.real(); }),
                                         -3.0, 3.0, 600000);
    const double im = testing::integrate(integrand([](Complex z) { return z.imag(); }),
                                         -3.0, 3.0, 600000);
    const Complex analytic = mode_overlap(fa, fb);
    CHECK(std::abs(analytic - Complex(re, im)) < 1e-4);
    CHECK(std::abs(analytic) <= 1.0 + 1e-15);

    const auto ta = time_mode(3 * centre(gen), centre(gen), dw);
    const auto tb = time_mode(3 * centre(gen), centre(gen), dw);
    const Complex t_analytic = mode_overlap(ta, tb);
    const double tre = testing::integrate(
        [&](double x) {
          return (std::conj(temporal_amplitude(ta, x)) * temporal_amplitude(tb, x)).real();
        },
        -2.0, 4.0, 600000);
    CHECK(std::abs(t_analytic.real() - tre) < 1e-4);
    CHECK(std::abs(t_analytic) <= 1.0 + 1e-15);
  }
}

TEST_CASE("overlap equals one only for identical modes") {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> shift(0.01, 0.5);
  const auto a = freq_mode(1.0, 2.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    CHECK(std::abs(mode_overlap(a, freq_mode(1.0 + shift(gen), 2.0, 1.0))) < 1.0 - 1e-6);
    CHECK(std::abs(mode_overlap(a, freq_mode(1.0, 2.0 + shift(gen), 1.0))) < 1.0 - 1e-6);
  }
}

TEST_CASE("temporal rectangle has a conjugate spectral width") {
  for (double dw : {0.01, 1.0, 250.0}) {
    const double width_t = 1.0 / dw;
    const auto m = time_mode(7.0, 0.3, dw);
    // Parseval over a wide window.
    const double lobe = 2.0 * std::numbers::pi / width_t;
    const double total = testing::integrate(
        [&](double w) { return std::norm(temporal_mode_spectrum(m, w)); }, 7.0 - 400 * lobe,
        7.0 + 400 * lobe, 2000000);
    CHECK(total == Approx(1.0).margin(2e-3));

    // RMS width over the main lobe, relative to 1/width_t.
    const double mass = testing::integrate(
        [&](double w) { return std::norm(temporal_mode_spectrum(m, w)); }, 7.0 - lobe,
        7.0 + lobe, 200000);
    const double second = testing::integrate(
        [&](double w) {
          return (w - 7.0) * (w - 7.0) * std::norm(temporal_mode_spectrum(m, w));
        },
        7.0 - lobe, 7.0 + lobe, 200000);
    const double ratio = std::sqrt(second / mass) * width_t;
    CHECK(ratio > 0.1);
    CHECK(ratio < 10.0);
  }
}
