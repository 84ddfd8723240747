#pragma once

#include <cmath>

namespace scn {

/// Step-size schedule xi(t) = 1 / t^exponent.
struct PowerRate {
  double exponent = 0.9;

  double operator()(int t) const { return 1.0 / std::pow(static_cast<double>(t), exponent); }

  /// sum xi(t) diverges and sum xi(t)^2 converges, i.e. exponent in (0.5, 1].
  bool admissible() const { return exponent > 0.5 && exponent <= 1.0; }
};

}  // namespace scn
