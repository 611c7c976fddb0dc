#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rydsim {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Matrix16c = Eigen::Matrix<Complex, 16, 16>;
using Vector4c = Eigen::Vector4cd;

inline constexpr double pi = std::numbers::pi;

namespace constants {
// CODATA 2018
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double k_boltzmann = 1.380649e-23;   // J/K
inline constexpr double bohr_magneton = 9.2740100783e-24;  // J/T
inline constexpr double cesium_mass = 2.20694650e-25; // kg (132.905451961 u)
}  // namespace constants

// Caller passed an argument outside the documented domain.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A state or process failed its structural invariants (hermiticity, positivity).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A quadrature or root-find did not converge to the requested tolerance.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent configuration input.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rydsim
