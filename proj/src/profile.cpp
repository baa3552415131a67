#include "latpilot/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace latpilot {

PowerProfile PowerProfile::rectangular(double peak) {
  if (!(peak > 0.0))
    throw std::invalid_argument("profile: rectangular peak must be positive");
  PowerProfile p;
  p.shape_ = ProfileShape::Rectangular;
  p.amplitude_ = peak;
  return p;
}

PowerProfile PowerProfile::triangular(double peak, double width) {
  if (!(peak > 0.0) || !(width > 0.0))
    throw std::invalid_argument("profile: triangular peak and width must be positive");
  PowerProfile p;
  p.shape_ = ProfileShape::Triangular;
  p.amplitude_ = peak;
  p.width_ = width;
  return p;
}

PowerProfile PowerProfile::tabulated(std::vector<double> x, std::vector<double> value) {
  if (x.size() != value.size() || x.size() < 2)
    throw std::invalid_argument("profile: tabulated samples need matching sizes >= 2");
  if (!std::is_sorted(x.begin(), x.end()))
    throw std::invalid_argument("profile: tabulated abscissae must be increasing");
  PowerProfile p;
  p.shape_ = ProfileShape::Tabulated;
  p.xs_ = std::move(x);
  p.ys_ = std::move(value);
  return p;
}

double PowerProfile::operator()(double x) const {
  switch (shape_) {
    case ProfileShape::Rectangular:
      return amplitude_;
    case ProfileShape::Triangular:
      return amplitude_ * std::max(0.0, 1.0 - std::abs(x) / width_);
    case ProfileShape::Tabulated: {
      if (x <= xs_.front()) return ys_.front();
      if (x >= xs_.back()) return ys_.back();
      auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      size_t i = static_cast<size_t>(it - xs_.begin());
      double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
      return ys_[i - 1] + t * (ys_[i] - ys_[i - 1]);
    }
  }
  return 0.0;
}

ChannelProfile ChannelProfile::rectangular(double delay_spread,
                                           double doppler_spread, double s0) {
  if (!(s0 > 0.0))
    throw std::invalid_argument("profile: scattering amplitude must be positive");
  ChannelProfile p;
  p.delay_spread = delay_spread;
  p.doppler_spread = doppler_spread;
  p.delay_profile = PowerProfile::rectangular(std::sqrt(s0));
  p.doppler_profile = PowerProfile::rectangular(std::sqrt(s0));
  auto warnings = p.validate();
  (void)warnings;
  return p;
}

std::vector<std::string> ChannelProfile::validate() const {
  if (!(delay_spread > 0.0) || !(doppler_spread > 0.0))
    throw std::invalid_argument("profile: spreads must be positive");
  const double delta = spread_factor();
  if (!(delta < 1.0))
    throw std::invalid_argument("profile: spread factor tau_D*nu_D must be < 1");
  std::vector<std::string> warnings;
  if (delta > 1e-1)
    warnings.push_back("spread factor " + std::to_string(delta) +
                       " exceeds 1e-1; the ICI-free grid model degrades");
  return warnings;
}

} // namespace latpilot
