#include "rydsim/fitting.hpp"

#include <cmath>

namespace rydsim {

SinusoidFit fit_sinusoid(std::span<const double> x, std::span<const double> y, int harmonic) {
  if (x.size() != y.size()) throw UsageError("fit_sinusoid: x/y size mismatch");
  if (x.size() < 3) throw UsageError("fit_sinusoid: need at least 3 samples");
  Eigen::MatrixXd design(static_cast<Eigen::Index>(x.size()), 3);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(x.size()));
  for (size_t i = 0; i < x.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    design(row, 0) = 1.0;
    design(row, 1) = std::cos(harmonic * x[i]);
    design(row, 2) = std::sin(harmonic * x[i]);
    rhs(row) = y[i];
  }
  const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(rhs);
  SinusoidFit fit;
  fit.offset = coef(0);
  fit.amplitude = std::hypot(coef(1), coef(2));
  fit.phase = std::atan2(-coef(2), coef(1));
  return fit;
}

}  // namespace rydsim
