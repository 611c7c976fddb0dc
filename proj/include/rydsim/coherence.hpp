#pragma once

#include <array>

#include "rydsim/types.hpp"

namespace rydsim {

/// Driven qubit in a thermal trap: Rabi frequency, fractional differential
/// light shift, and vibrational frequencies.
struct ThermalDriveParams {
  double omega = 2 * pi * 7e3;           // rad/s
  double delta_ls_bar = 2.5e-4;          // dimensionless
  std::array<double, 3> omega_trap = {2 * pi * 30e3, 2 * pi * 30e3, 2 * pi * 6e3};
  double temperature = 15e-6;            // K

  double beta() const { return constants::hbar / (constants::k_boltzmann * temperature); }
  /// Semiclassical treatment assumes beta * max(omega_trap) well below one.
  bool in_thermal_limit() const;
};

void validate(const ThermalDriveParams& p);

/// P_|1>(t) from the exact vibrational sum with normalized Boltzmann weights.
/// The per-axis cutoff keeps at least 1 - 1e-8 of the thermal weight.
double rabi_population_exact(const ThermalDriveParams& p, double t);

/// Discrete-sum analogs of the semiclassical a_m / a_m' integrals (the
/// brute-force oracle for the continuum forms). m may be fractional.
struct Quadratures {
  double a_m;
  double a_m_prime;
};
Quadratures am_exact_sum(const ThermalDriveParams& p, double m);

/// a_0 = 3 dls^2 / (2 omega^2 beta^2).
double semiclassical_a0(const ThermalDriveParams& p);

struct AmResult {
  double a_m;                 // cosine-weighted integral form
  double a_m_prime;           // sine-weighted integral form
  double a_m_expansion;       // a_0 - (315 pi^2 m^2 / 4) (dls/(omega beta))^6
  double a_m_prime_expansion; // first order in t
};
AmResult semiclassical_am(const ThermalDriveParams& p, double m);

struct T2Rabi {
  double closed_form;    // sqrt(8(1-1/e)/105) |omega| beta^2 / dls^2
  double integral_root;  // a_m/a_0 = 1/e solved on the integral form,
                         // linearly interpolated between bracketing integer m
};
T2Rabi t2_rabi(const ThermalDriveParams& p);

/// Static-superposition dephasing time with 1/T scaling pinned to a measured
/// anchor point.
double t2_ramsey_static(double temperature, double anchor_t2 = 1.6e-3,
                        double anchor_temperature = 15e-6);

}  // namespace rydsim
