#pragma once

#include <span>

#include "rydsim/types.hpp"

namespace rydsim {

struct SinusoidFit {
  double offset;
  double amplitude;  // sqrt(a^2 + b^2) from y = offset + a cos(kx) + b sin(kx)
  double phase;      // y = offset + amplitude * cos(kx + phase)
};

/// Exact linear least squares on the {1, cos(kx), sin(kx)} basis.
SinusoidFit fit_sinusoid(std::span<const double> x, std::span<const double> y, int harmonic);

/// Parity-curve fit on {1, cos(2 phi), sin(2 phi)}.
inline SinusoidFit fit_parity(std::span<const double> phi, std::span<const double> value) {
  return fit_sinusoid(phi, value, 2);
}

}  // namespace rydsim
