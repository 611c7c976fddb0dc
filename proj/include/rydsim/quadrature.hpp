#pragma once

#include <functional>

#include <Eigen/Dense>

#include "rydsim/types.hpp"

namespace rydsim {

struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Nodes/weights for weight exp(-x^2) on (-inf, inf), via Golub-Welsch.
GaussRule gauss_hermite(int order);

/// Nodes/weights for weight exp(-x) on [0, inf).
GaussRule gauss_laguerre(int order);

/// Mean of f over an axis-aligned Gaussian with rms widths (sx, sy, sz).
/// sz == 0 collapses to the 2D transverse distribution at z = 0.
double gaussian_mean(const std::function<double(double, double, double)>& f,
                     double sx, double sy, double sz, int order);

/// gaussian_mean with an automatic order-doubling check; throws
/// ConvergenceError when |v(2n) - v(n)| exceeds rel_tol * max(1, |v|).
double gaussian_mean_checked(const std::function<double(double, double, double)>& f,
                             double sx, double sy, double sz, int order,
                             double rel_tol = 1e-6);

}  // namespace rydsim
