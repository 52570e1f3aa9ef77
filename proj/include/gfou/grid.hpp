#pragma once

#include <stdexcept>

namespace gfou {

/// Uniform time grid t_i = i*T/n on [0, T].
struct GridSpec {
  double horizon = 0.0;
  int steps = 0;

  GridSpec() = default;
  GridSpec(double T, int n) : horizon(T), steps(n) {
    if (!(T > 0.0)) throw std::domain_error("GridSpec: horizon must be positive");
    if (n < 2) throw std::domain_error("GridSpec: need at least 2 steps");
  }

  double dt() const { return horizon / steps; }
  double node(int i) const { return horizon * i / steps; }
  double midpoint(int i) const { return horizon * (i + 0.5) / steps; }

  bool operator==(const GridSpec& o) const {
    return horizon == o.horizon && steps == o.steps;
  }
};

} // namespace gfou
