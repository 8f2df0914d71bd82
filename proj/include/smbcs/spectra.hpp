#pragma once

#include <string_view>

#include "smbcs/matrix.hpp"

namespace smbcs {

/// Which conjugate variable carries the rectangular envelope.
///
/// RectangularFrequency: amplitude xi(w - w_s) e^{+i w t_s} with a flat top of
///   width `bandwidth` centred on w_s.
/// RectangularTemporal: wave packet sqrt(dw) e^{-i w_s t} on the half-open
///   window [t_s, t_s + 1/dw).
enum class SpectralShape { RectangularFrequency, RectangularTemporal };

std::string_view to_string(SpectralShape shape);
SpectralShape spectral_shape_from_string(std::string_view name);

/// Single-photon inner mode. Units are SI: rad/s for frequencies, s for times.
class SpectralMode {
 public:
  /// Throws DomainError unless bandwidth is finite and > 0 and the centre
  /// values are finite.
  SpectralMode(double central_frequency, double central_time, double bandwidth,
               SpectralShape shape);

  double central_frequency() const { return central_frequency_; }
  double central_time() const { return central_time_; }
  double bandwidth() const { return bandwidth_; }
  SpectralShape shape() const { return shape_; }

  /// Support of the rectangular envelope in its own variable: [lo, hi].
  double support_begin() const;
  double support_end() const;

  bool operator==(const SpectralMode&) const = default;

 private:
  double central_frequency_;
  double central_time_;
  double bandwidth_;
  SpectralShape shape_;
};

/// xi(w - w_s) e^{+i w t_s}: (1/sqrt(dw)) e^{+i w t_s} for |w - w_s| <= dw/2.
Complex frequency_amplitude(const SpectralMode& mode, double omega);

/// sqrt(dw) e^{-i w_s t} for t in [t_s, t_s + 1/dw), else 0.
Complex temporal_amplitude(const SpectralMode& mode, double t);

/// Inner product <a|b> taken in the variable the shapes are defined in.
/// Both modes must share a shape.
Complex mode_overlap(const SpectralMode& a, const SpectralMode& b);

/// Unitary Fourier transform (kernel e^{+i w t} / sqrt(2 pi)) of a
/// RectangularTemporal wave packet: a sinc centred on w_s.
Complex temporal_mode_spectrum(const SpectralMode& mode, double omega);

}  // namespace smbcs
