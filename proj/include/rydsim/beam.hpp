#pragma once

#include <cstdint>

#include "rydsim/types.hpp"

namespace rydsim {

/// Gaussian position distribution of a trapped atom at finite temperature.
struct TrapDistribution {
  double sigma = 0.16e-6;   // m, transverse rms
  double sigma_z = 1.47e-6; // m, axial rms
};

/// Two focused Gaussian beams aligned with the trap center, with Stark-shift
/// coefficients delta1, delta2 and constant detuning delta0.
struct BeamGeometry {
  double w1 = 2.25e-6;
  double w2 = 2.5e-6;
  double lambda1 = 459e-9;
  double lambda2 = 1038e-9;
  double omega = 2 * pi * 4.5e6;   // rad/s, two-photon Rabi frequency at center
  double delta1 = -2 * pi * 2.7e6; // rad/s
  double delta2 = 2 * pi * 6.4e6;  // rad/s
  double delta0 = -(delta1 + delta2);  // resonant at trap center

  double rayleigh1() const { return pi * w1 * w1 / lambda1; }
  double rayleigh2() const { return pi * w2 * w2 / lambda2; }

  /// delta0 = -(delta1 + delta2) so that an atom at the center is resonant.
  static BeamGeometry resonant_at_center(double w1, double w2, double lambda1,
                                         double lambda2, double omega,
                                         double delta1, double delta2);
};

struct LocalField {
  double f1 = 1.0;           // field amplitude of beam 1 relative to center
  double f2 = 1.0;
  double omega_local = 0.0;  // omega * f1 * f2
  double delta_local = 0.0;  // delta0 + delta1 f1^2 + delta2 f2^2
};

LocalField envelope(const BeamGeometry& geom, double x, double y, double z);

enum class PulseTarget { Pi, TwoPi };

double nominal_pulse_time(const BeamGeometry& geom, PulseTarget target);

struct PulseStats {
  double mean;      // <P>
  double variance;  // <(P - P_target)^2>
};

/// Position-averaged probability to remain in |1> after a pulse of length t,
/// using the generalized Rabi frequency sqrt(omega^2 + delta^2) in the
/// oscillation argument. target_pop enters only the variance.
PulseStats avg_population_after_pulse(const BeamGeometry& geom, const TrapDistribution& dist,
                                      double t, double target_pop, int order = 24);

/// Position-averaged Rydberg population after a pi pulse.
double pi_pulse_rydberg_population(const BeamGeometry& geom, const TrapDistribution& dist,
                                   double t, int order = 24);

struct PhaseStats {
  double mean_phi;
  double one_minus_cos;
  double stddev;
};

/// Statistics of the wavefunction phase the pulse leaves behind, measured
/// relative to the ideal value (principal branch of the arctangent form).
PhaseStats avg_phase_after_pulse(const BeamGeometry& geom, const TrapDistribution& dist,
                                 double t, int order = 24);

/// Pulse time minimizing |<P> - P_target| near the nominal time
/// (golden-section search, relative tolerance 1e-6 by default).
double optimize_pulse_time(const BeamGeometry& geom, const TrapDistribution& dist,
                           PulseTarget target, int order = 24, double rel_tol = 1e-6);

struct ScalingExponents {
  double std_slope;
  double var_slope;
};

/// Log-log slope of the 2D (sigma_z = 0) population std and variance against
/// sigma/w1 in the small-sigma regime, at the nominal 2pi time.
ScalingExponents scaling_exponent_check(const BeamGeometry& geom, double sigma_lo,
                                        double sigma_hi, int n_points, int order = 32);

struct EscapeEstimate {
  double probability;
  double std_error;
  std::uint64_t escapes;
  std::uint64_t samples;
};

/// Monte-Carlo transverse trap-drop escape check against the closed form.
EscapeEstimate monte_carlo_escape(double escape_distance, double t_drop,
                                  double temperature, double mass,
                                  std::uint64_t n_samples, std::uint64_t seed);

}  // namespace rydsim
