#include "smbcs/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "smbcs/errors.hpp"

namespace smbcs {

namespace {

void require_shape(const SpectralMode& mode, SpectralShape shape, const char* op) {
  if (mode.shape() != shape) {
    throw DomainError(std::string(op) + ": mode has shape " +
                      std::string(to_string(mode.shape())) + ", expected " +
                      std::string(to_string(shape)));
  }
}

// sin(x)/x, with the removable singularity filled in.
double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

// Integral of e^{i k x} over [lo, hi] in closed form.
Complex plane_wave_integral(double k, double lo, double hi) {
  const double width = hi - lo;
  return std::polar(width * sinc(0.5 * k * width), 0.5 * k * (lo + hi));
}

}  // namespace

std::string_view to_string(SpectralShape shape) {
  switch (shape) {
    case SpectralShape::RectangularFrequency:
      return "rectangular_frequency";
    case SpectralShape::RectangularTemporal:
      return "rectangular_temporal";
  }
  return "unknown";
}

SpectralShape spectral_shape_from_string(std::string_view name) {
  if (name == "rectangular_frequency") return SpectralShape::RectangularFrequency;
  if (name == "rectangular_temporal") return SpectralShape::RectangularTemporal;
  throw DomainError("unknown spectral shape '" + std::string(name) + "'");
}

SpectralMode::SpectralMode(double central_frequency, double central_time,
                           double bandwidth, SpectralShape shape)
    : central_frequency_(central_frequency),
      central_time_(central_time),
      bandwidth_(bandwidth),
      shape_(shape) {
  if (!std::isfinite(central_frequency) || !std::isfinite(central_time)) {
    throw DomainError("SpectralMode: central values must be finite");
  }
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw DomainError("SpectralMode: bandwidth must be finite and > 0");
  }
}

double SpectralMode::support_begin() const {
  return shape_ == SpectralShape::RectangularFrequency
             ? central_frequency_ - 0.5 * bandwidth_
             : central_time_;
}

double SpectralMode::support_end() const {
  return shape_ == SpectralShape::RectangularFrequency
             ? central_frequency_ + 0.5 * bandwidth_
             : central_time_ + 1.0 / bandwidth_;
}

Complex frequency_amplitude(const SpectralMode& mode, double omega) {
  require_shape(mode, SpectralShape::RectangularFrequency, "frequency_amplitude");
  if (std::abs(omega - mode.central_frequency()) > 0.5 * mode.bandwidth()) return {};
  return std::polar(1.0 / std::sqrt(mode.bandwidth()), omega * mode.central_time());
}

Complex temporal_amplitude(const SpectralMode& mode, double t) {
  require_shape(mode, SpectralShape::RectangularTemporal, "temporal_amplitude");
  if (t < mode.support_begin() || t >= mode.support_end()) return {};
  return std::polar(std::sqrt(mode.bandwidth()), -mode.central_frequency() * t);
}

Complex mode_overlap(const SpectralMode& a, const SpectralMode& b) {
  if (a.shape() != b.shape()) throw DomainError("mode_overlap: shape mismatch");
  const double lo = std::max(a.support_begin(), b.support_begin());
  const double hi = std::min(a.support_end(), b.support_end());
  if (hi <= lo) return {};
  if (a.shape() == SpectralShape::RectangularFrequency) {
    // conj(xi_a e^{i w t_a}) xi_b e^{i w t_b}
    const double scale = 1.0 / std::sqrt(a.bandwidth() * b.bandwidth());
    return scale * plane_wave_integral(b.central_time() - a.central_time(), lo, hi);
  }
  // conj(e^{-i w_a t}) e^{-i w_b t}
  const double scale = std::sqrt(a.bandwidth() * b.bandwidth());
  return scale *
         plane_wave_integral(a.central_frequency() - b.central_frequency(), lo, hi);
}

Complex temporal_mode_spectrum(const SpectralMode& mode, double omega) {
  require_shape(mode, SpectralShape::RectangularTemporal, "temporal_mode_spectrum");
  const double detuning = omega - mode.central_frequency();
  return std::sqrt(mode.bandwidth() / (2.0 * std::numbers::pi)) *
         plane_wave_integral(detuning, mode.support_begin(), mode.support_end());
}

}  // namespace smbcs
