#pragma once

#include "ostwave/errors.hpp"

namespace ostwave {

// gamma: rotation coefficient (> 0), beta: dispersion coefficient (any sign;
// beta = 0 selects the reduced model without third-order dispersion).
struct ModelParams {
  double gamma = 1.0;
  double beta = 1.0;

  void validate() const {
    if (!(gamma > 0.0))
      throw ConfigError("ModelParams: gamma must be positive");
  }

  bool operator==(const ModelParams&) const = default;
};

}  // namespace ostwave
