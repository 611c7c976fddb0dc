#include "rydsim/budget.hpp"

#include <cmath>

namespace rydsim {

void validate(const PhysicalParams& p) {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0)) throw ValidationError(std::string("parameter must be positive: ") + what);
  };
  auto nonnegative = [](double v, const char* what) {
    if (!(v >= 0.0)) throw ValidationError(std::string("duration must be >= 0: ") + what);
  };
  positive(p.temperature, "temperature");
  positive(p.lambda1, "lambda1");
  positive(p.lambda2, "lambda2");
  nonnegative(p.t_pi, "t_pi");
  nonnegative(p.t_2pi, "t_2pi");
  nonnegative(p.t_gap, "t_gap");
  nonnegative(p.t_gr, "t_gr");
  positive(p.tau_rydberg, "tau_rydberg");
  positive(p.tau_7p, "tau_7p");
  positive(p.delta_1photon, "delta_1photon");
  positive(p.blockade_shift, "blockade_shift");
  positive(p.sigma_b, "sigma_b");
  positive(p.atom_mass, "atom_mass");
  if (p.lambda1 >= p.lambda2)
    throw ValidationError("lambda1 must be below lambda2 (blue drives the first leg)");
  for (double e : {p.eps_laser_noise, p.eps_position, p.eps_ryd_dephasing_free,
                   p.eps_ryd_dephasing_blockaded, p.eps_crosstalk, p.eps_uwave, p.eps_stark,
                   p.eps_readout, p.eps_pumping, p.eps_measurement})
    if (!(e >= 0.0 && e <= 1.0))
      throw ValidationError("measured channel strength outside [0, 1]");
  if (!(p.fill_fraction >= 0.0 && p.fill_fraction <= 1.0))
    throw ValidationError("fill_fraction outside [0, 1]");
}

DephasingEstimate doppler_dephasing(double temperature, double lambda1, double lambda2,
                                    double t, double mass) {
  const double k_2nu = 2 * pi / lambda1 - 2 * pi / lambda2;
  const double t2 = std::sqrt(2 * mass / (constants::k_boltzmann * temperature)) / k_2nu;
  const double coherence = std::exp(-(t * t) / (t2 * t2));
  return {t2, 0.5 * (1.0 - coherence)};
}

double lifetime_error(double t_rydberg_integrated, double tau_rydberg) {
  if (t_rydberg_integrated < 0 || tau_rydberg <= 0)
    throw UsageError("lifetime_error: t >= 0 and tau > 0 required");
  return 1.0 - std::exp(-t_rydberg_integrated / tau_rydberg);
}

double intermediate_scattering(double tau_7p, double delta_1photon, bool blockaded) {
  if (tau_7p <= 0 || delta_1photon <= 0)
    throw UsageError("intermediate_scattering: tau and delta must be positive");
  const double p_free = 0.5 * pi / (tau_7p * delta_1photon);
  return blockaded ? 0.5 * p_free : p_free;
}

double blockade_leakage(double omega, double blockade_shift) {
  if (blockade_shift <= 0) throw UsageError("blockade_leakage: B must be positive");
  const double r = omega / blockade_shift;
  return r * r / 8.0;
}

DephasingEstimate magnetic_dephasing(double sigma_b, double g_factor_product, double t) {
  if (sigma_b <= 0 || g_factor_product <= 0)
    throw UsageError("magnetic_dephasing: sigma_B and g-factor product must be positive");
  const double t2 = std::pow(2.0, 1.5) * pi * constants::hbar /
                    (g_factor_product * constants::bohr_magneton * sigma_b);
  return {t2, 1.0 - std::exp(-(t * t) / (t2 * t2))};
}

CrosstalkEstimate crosstalk_estimate(double d, double w1, double w2, double omega,
                                     double delta_prime) {
  if (d <= 0 || w1 <= 0 || w2 <= 0 || delta_prime <= 0)
    throw UsageError("crosstalk_estimate: all inputs must be positive");
  const double ratio = std::exp(-d * d / (w1 * w1)) * std::exp(-d * d / (w2 * w2));
  const double suppressed = ratio * omega / delta_prime;
  return {ratio, suppressed * suppressed};
}

double escape_probability_closed(double v_escape, double temperature, double mass) {
  if (temperature <= 0 || mass <= 0)
    throw UsageError("escape_probability_closed: T and m must be positive");
  return std::exp(-mass * v_escape * v_escape / (2.0 * constants::k_boltzmann * temperature));
}

double crosstalk_fill_scaled(double fill_fraction, double per_neighbor) {
  return 8.0 * fill_fraction * 0.5 * per_neighbor;
}

ErrorBudget assemble_budget(const PhysicalParams& p) {
  validate(p);
  ErrorBudget b;
  auto& s = b.strengths;

  const auto doppler = doppler_dephasing(p.temperature, p.lambda1, p.lambda2, p.t_gr, p.atom_mass);
  s.doppler = doppler.eps;
  b.t2_doppler = doppler.t2;

  s.lifetime_control = lifetime_error(p.t_gr, p.tau_rydberg);
  s.lifetime_target = lifetime_error(0.5 * p.t_2pi, p.tau_rydberg);
  s.scattering_per_beam = intermediate_scattering(p.tau_7p, p.delta_1photon, true);
  b.scattering_free = intermediate_scattering(p.tau_7p, p.delta_1photon, false);
  s.blockade_leakage = blockade_leakage(p.omega_cz, p.blockade_shift);

  const auto magnetic = magnetic_dephasing(p.sigma_b, p.g_factor_product, p.t_gr);
  b.t2_magnetic = magnetic.t2;
  b.eps_magnetic = magnetic.eps;

  const auto xt = crosstalk_estimate(p.array_period, p.crosstalk_w1, p.crosstalk_w2,
                                     p.crosstalk_omega, p.crosstalk_stark);
  b.crosstalk_omega_ratio = xt.omega_ratio;
  b.crosstalk_amplitude = xt.amplitude;

  b.escape_probability = escape_probability_closed(
      p.escape_distance / p.trap_drop_time, p.temperature, p.atom_mass);

  s.position = p.eps_position;
  s.laser_noise = p.eps_laser_noise;
  s.ryd_dephasing_free = p.eps_ryd_dephasing_free;
  s.ryd_dephasing_blockaded = p.eps_ryd_dephasing_blockaded;
  s.crosstalk = p.eps_crosstalk;
  s.uwave = p.eps_uwave;
  s.stark = p.eps_stark;
  s.readout = p.eps_readout;
  s.pumping = p.eps_pumping;
  s.measurement = p.eps_measurement;

  for (double e : {s.doppler, s.lifetime_control, s.lifetime_target, s.scattering_per_beam,
                   s.blockade_leakage, b.eps_magnetic, b.escape_probability})
    if (!(e >= 0.0 && e <= 1.0))
      throw ValidationError("calculated channel strength outside [0, 1]");

  const auto C = Provenance::Calculated;
  const auto M = Provenance::Measured;
  b.rows = {
      {"doppler_dephasing_control", s.doppler, C, "cz:control:dephasing",
       "(1 - exp(-t_gr^2/T2D^2))/2"},
      {"lifetime_control", s.lifetime_control, C, "cz:control:loss(half before/after target pulse)",
       "1 - exp(-t_gr/tau)"},
      {"lifetime_target", s.lifetime_target, C, "cz:target-2pi:nonblockaded:loss",
       "1 - exp(-t_2pi/(2 tau))"},
      {"scattering_7p_per_beam", s.scattering_per_beam, C,
       "cz:per-beam loss (control both beams; target per branch)", "(pi/4)/(tau_7p delta)"},
      {"scattering_7p_free", b.scattering_free, C, "diagnostic (two-beam total)",
       "(pi/2)/(tau_7p delta)"},
      {"blockade_leakage", s.blockade_leakage, C, "cz:target-2pi:nonblockaded:dephasing",
       "omega^2/(8 B^2)"},
      {"position_per_pi_pulse", s.position, M, "cz:loss per Rydberg pi pulse", "input"},
      {"laser_noise_per_pi_pulse", s.laser_noise, M, "cz:loss per Rydberg pi pulse", "input"},
      {"rydberg_crosstalk_01", s.crosstalk, M, "cz:target-2pi:nonblockaded:dephasing", "input"},
      {"ryd_dephasing_free", s.ryd_dephasing_free, M, "cz:dephasing per pi pulse", "input"},
      {"ryd_dephasing_blockaded", s.ryd_dephasing_blockaded, M,
       "cz:target-2pi:blockaded:dephasing per pi pulse", "input"},
      {"uwave_per_half_pi_pulse", s.uwave, M, "state-prep, local-rotation, measurement", "input"},
      {"stark_pulse", s.stark, M, "local-rotation:target:dephasing", "input"},
      {"readout_loss_per_readout", s.readout, M, "state-prep and measurement:loss", "input"},
      {"optical_pumping", s.pumping, M, "state-prep:loss", "input"},
      {"state_measurement", s.measurement, M, "measurement:confusion", "input"},
      {"magnetic_dephasing", b.eps_magnetic, C, "not-in-pipeline",
       "1 - exp(-t_gr^2/T2B^2)"},
      {"trap_escape", b.escape_probability, C, "not-in-pipeline",
       "exp(-m v_e^2/(2 k_B T))"},
  };
  return b;
}

}  // namespace rydsim
