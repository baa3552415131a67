#pragma once

#include <string>
#include <vector>

namespace latpilot {

enum class ProfileShape { Rectangular, Triangular, Tabulated };

/// One-dimensional power profile P(x), evaluated on a symmetric support
/// [-spread/2, spread/2] supplied by the caller at integration time.
///   rectangular: P(x) = peak
///   triangular:  P(x) = peak * max(0, 1 - |x|/width), width in absolute units
///   tabulated:   piecewise-linear interpolation of (x, value) samples
class PowerProfile {
 public:
  static PowerProfile rectangular(double peak);
  static PowerProfile triangular(double peak, double width);
  static PowerProfile tabulated(std::vector<double> x, std::vector<double> value);

  double operator()(double x) const;
  double peak() const { return (*this)(0.0); }
  ProfileShape shape() const { return shape_; }
  bool is_rectangular() const { return shape_ == ProfileShape::Rectangular; }

 private:
  PowerProfile() = default;
  ProfileShape shape_ = ProfileShape::Rectangular;
  double amplitude_ = 1.0;
  double width_ = 0.0;
  std::vector<double> xs_, ys_;
};

/// Separable scattering description: delay spread tau_D, Doppler spread nu_D,
/// per-domain power profiles. The scattering amplitude at the origin is
/// S0 = P_tau(0) * P_nu(0).
struct ChannelProfile {
  double delay_spread = 0.0;   ///< tau_D [s]
  double doppler_spread = 0.0; ///< nu_D [Hz]
  PowerProfile delay_profile = PowerProfile::rectangular(1.0);
  PowerProfile doppler_profile = PowerProfile::rectangular(1.0);

  double spread_factor() const { return delay_spread * doppler_spread; }
  double scattering_amplitude() const {
    return delay_profile.peak() * doppler_profile.peak();
  }

  /// Constant scattering function of amplitude s0 on the support rectangle.
  static ChannelProfile rectangular(double delay_spread, double doppler_spread,
                                    double s0);

  /// Throws on hard violations; returns human-readable warnings (e.g. the
  /// spread factor exceeding 1e-1, where the ICI-free grid model degrades).
  std::vector<std::string> validate() const;
};

} // namespace latpilot
