#pragma once

#include <stdexcept>

namespace latpilot {

/// Time-frequency grid geometry of one frame: M subcarriers spaced F apart,
/// N symbols of duration T. TF >= 1 (equality only without cyclic prefix).
struct GridConfig {
  int subcarriers = 0;             ///< M
  int symbols = 0;                 ///< N
  double symbol_duration = 0.0;    ///< T [s]
  double subcarrier_spacing = 0.0; ///< F [Hz]

  long size() const { return static_cast<long>(subcarriers) * symbols; }
  double tf_product() const { return symbol_duration * subcarrier_spacing; }

  void validate() const {
    if (subcarriers < 1 || symbols < 1)
      throw std::invalid_argument("grid: subcarrier and symbol counts must be >= 1");
    if (!(symbol_duration > 0.0) || !(subcarrier_spacing > 0.0))
      throw std::invalid_argument("grid: T and F must be positive");
    if (tf_product() < 1.0)
      throw std::invalid_argument("grid: TF < 1 is not realizable");
  }
};

} // namespace latpilot
