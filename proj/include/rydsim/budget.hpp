#pragma once

#include <string>
#include <vector>

#include "rydsim/types.hpp"

namespace rydsim {

/// Atomic, beam, trap, and timing inputs plus directly measured channel
/// strengths. All quantities in SI units, angular frequencies in rad/s.
struct PhysicalParams {
  double temperature = 15e-6;          // K
  double lambda1 = 459e-9;             // m, first Rydberg leg
  double lambda2 = 1038e-9;            // m, second leg
  double t_pi = 150e-9;                // s
  double t_2pi = 220e-9;               // s
  double t_gap = 300e-9;               // s
  double t_gr = 0.98e-6;               // s, ground-Rydberg superposition time
  double tau_rydberg = 130e-6;         // s, 66s radiative lifetime (300 K bath)
  double tau_7p = 155e-9;              // s, intermediate-state lifetime
  double delta_1photon = 2 * pi * 680e6;   // rad/s
  double omega_cz = 2 * pi * 4.6e6;        // rad/s, target-pulse Rabi frequency
  double blockade_shift = 2 * pi * 45e6;   // rad/s
  double array_period = 3.1e-6;        // m
  double crosstalk_w1 = 3.0e-6;        // m, waists used for the crosstalk estimate
  double crosstalk_w2 = 3.0e-6;        // m
  double crosstalk_omega = 2 * pi * 2.5e6;   // rad/s
  double crosstalk_stark = 2 * pi * 2.0e6;   // rad/s, differential shift at neighbors
  double sigma_b = 1.0e-6;             // T, magnetic noise amplitude
  double g_factor_product = 1.0;       // |g_R m_jR - g_g m_fg|
  double atom_mass = constants::cesium_mass;  // kg
  double escape_distance = 1.2e-6;     // m
  double trap_drop_time = 1.7e-6;      // s
  double fill_fraction = 0.55;

  // measured channel strengths (probabilities)
  double eps_laser_noise = 0.0025;         // per atom per Rydberg pi pulse
  double eps_position = 0.0025;            // per atom per Rydberg pi pulse
  double eps_ryd_dephasing_free = 0.018;   // per atom per Rydberg pi pulse
  double eps_ryd_dephasing_blockaded = 0.006;
  double eps_crosstalk = 0.005;            // for |01> input, 55% filled array
  double eps_uwave = 0.0028;               // per atom per microwave pi/2 pulse
  double eps_stark = 0.006;                // local Stark pulse
  double eps_readout = 0.0025;             // per atom per readout
  double eps_pumping = 0.005;              // per atom
  double eps_measurement = 1.5e-4;         // per atom
};

void validate(const PhysicalParams& p);

struct DephasingEstimate {
  double t2;   // s
  double eps;  // dephasing probability over the requested duration
};

/// Two-photon Doppler dephasing: T2 = sqrt(2M/kT)/k_2nu with
/// k_2nu = 2 pi/lambda1 - 2 pi/lambda2, eps = (1 - exp(-t^2/T2^2))/2.
DephasingEstimate doppler_dephasing(double temperature, double lambda1, double lambda2,
                                    double t, double mass = constants::cesium_mass);

/// Spontaneous-emission probability 1 - exp(-t/tau).
double lifetime_error(double t_rydberg_integrated, double tau_rydberg);

/// 7p scattering probability per pi pulse, (pi/2)/(tau delta); halved when the
/// excitation is blockaded (only one beam scatters).
double intermediate_scattering(double tau_7p, double delta_1photon, bool blockaded);

/// Residual rotation of the blockaded state, omega^2 / (8 B^2).
double blockade_leakage(double omega, double blockade_shift);

/// Magnetic-noise coherence time 2^{3/2} pi hbar / (g mu_B sigma_B) and the
/// coherence loss 1 - exp(-t^2/T2^2).
DephasingEstimate magnetic_dephasing(double sigma_b, double g_factor_product, double t);

struct CrosstalkEstimate {
  double omega_ratio;  // Omega'/Omega at a neighboring site
  double amplitude;    // suppressed oscillation amplitude (Omega'/Delta')^2
};
CrosstalkEstimate crosstalk_estimate(double d, double w1, double w2, double omega,
                                     double delta_prime);

/// Closed form of the transverse Maxwell-Boltzmann escape integral,
/// exp(-m v_e^2 / (2 k T)).
double escape_probability_closed(double v_escape, double temperature, double mass);

/// Crosstalk strength for a given fill fraction: 8 neighbors, half in |1>,
/// 0.0025 excitation ceiling per neighbor.
double crosstalk_fill_scaled(double fill_fraction, double per_neighbor = 0.0025);

enum class Provenance { Calculated, Measured };

struct BudgetRow {
  std::string name;
  double value = 0.0;
  Provenance provenance = Provenance::Measured;
  std::string placement;  // stage vocabulary of the channel pipeline
  std::string formula;    // short formula or "input"
};

/// Channel strengths consumed by the Bell pipeline, one per error source.
struct ChannelStrengths {
  double doppler = 0.0;
  double lifetime_control = 0.0;
  double lifetime_target = 0.0;
  double scattering_per_beam = 0.0;
  double blockade_leakage = 0.0;
  double position = 0.0;
  double laser_noise = 0.0;
  double ryd_dephasing_free = 0.0;
  double ryd_dephasing_blockaded = 0.0;
  double crosstalk = 0.0;
  double uwave = 0.0;
  double stark = 0.0;
  double readout = 0.0;
  double pumping = 0.0;
  double measurement = 0.0;
};

struct ErrorBudget {
  std::vector<BudgetRow> rows;
  ChannelStrengths strengths;
  // diagnostics that do not enter the pipeline
  double t2_doppler = 0.0;        // s
  double t2_magnetic = 0.0;       // s
  double eps_magnetic = 0.0;
  double scattering_free = 0.0;   // both beams, per pi pulse
  double escape_probability = 0.0;
  double crosstalk_omega_ratio = 0.0;
  double crosstalk_amplitude = 0.0;
};

/// Computes every calculated row from the formulas above and copies each
/// measured row from params. Throws ValidationError if any strength leaves
/// [0, 1].
ErrorBudget assemble_budget(const PhysicalParams& params);

}  // namespace rydsim
