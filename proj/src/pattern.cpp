#include "latpilot/pattern.hpp"

#include <stdexcept>
#include <string>

namespace latpilot {

PilotPattern::PilotPattern(int subcarriers, int symbols,
                           std::vector<std::uint8_t> mask, double pilot_power)
    : subcarriers_(subcarriers), symbols_(symbols), mask_(std::move(mask)),
      pilot_power_(pilot_power) {
  if (subcarriers_ < 1 || symbols_ < 1)
    throw std::invalid_argument("pattern: grid dimensions must be >= 1");
  if (static_cast<long>(mask_.size()) != size())
    throw std::invalid_argument("pattern: mask must have M*N entries");
  if (!(pilot_power_ > 0.0))
    throw std::invalid_argument("pattern: pilot power must be positive");
  for (long k = 0; k < size(); ++k) {
    const auto v = mask_[static_cast<size_t>(k)];
    if (v > 1) throw std::invalid_argument("pattern: mask entries must be 0 or 1");
    if (v) pilot_indices_.push_back(k);
  }
}

PilotPattern PilotPattern::from_indices(int subcarriers, int symbols,
                                        const std::vector<long>& indices,
                                        double pilot_power) {
  std::vector<std::uint8_t> mask(
      static_cast<size_t>(subcarriers) * static_cast<size_t>(symbols), 0);
  for (long k : indices) {
    if (k < 0 || k >= static_cast<long>(mask.size()))
      throw std::invalid_argument("pattern: pilot index out of range");
    mask[static_cast<size_t>(k)] = 1;
  }
  return PilotPattern(subcarriers, symbols, std::move(mask), pilot_power);
}

PilotPattern PilotPattern::all_pilots(int subcarriers, int symbols, double pilot_power) {
  std::vector<std::uint8_t> mask(
      static_cast<size_t>(subcarriers) * static_cast<size_t>(symbols), 1);
  return PilotPattern(subcarriers, symbols, std::move(mask), pilot_power);
}

PilotPattern PilotPattern::empty(int subcarriers, int symbols) {
  std::vector<std::uint8_t> mask(
      static_cast<size_t>(subcarriers) * static_cast<size_t>(symbols), 0);
  return PilotPattern(subcarriers, symbols, std::move(mask));
}

void PilotPattern::set_pilot_power(double sigma_p2) {
  if (!(sigma_p2 > 0.0))
    throw std::invalid_argument("pattern: pilot power must be positive");
  pilot_power_ = sigma_p2;
}

PilotPattern PilotPattern::with_power_budget(double beta) const {
  if (!(beta > 0.0))
    throw std::invalid_argument("pattern: power budget must be positive");
  if (pilot_count() == 0)
    throw std::invalid_argument("pattern: cannot split a budget over zero pilots");
  PilotPattern copy = *this;
  copy.pilot_power_ = static_cast<double>(symbols_) * beta / pilot_count();
  return copy;
}

void NoiseDataStats::validate() const {
  if (!(noise_var > 0.0))
    throw std::invalid_argument("stats: noise variance must be positive");
  if (!(data_var >= 0.0))
    throw std::invalid_argument("stats: data power must be nonnegative");
}

double pilot_snr(const PilotPattern& pattern, const NoiseDataStats& stats) {
  stats.validate();
  return pattern.pilot_power() / stats.noise_var;
}

} // namespace latpilot
