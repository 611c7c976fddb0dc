#include "rydsim/beam.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "rydsim/budget.hpp"
#include "rydsim/quadrature.hpp"

namespace rydsim {

BeamGeometry BeamGeometry::resonant_at_center(double w1, double w2, double lambda1,
                                              double lambda2, double omega,
                                              double delta1, double delta2) {
  BeamGeometry g;
  g.w1 = w1;
  g.w2 = w2;
  g.lambda1 = lambda1;
  g.lambda2 = lambda2;
  g.omega = omega;
  g.delta1 = delta1;
  g.delta2 = delta2;
  g.delta0 = -(delta1 + delta2);
  return g;
}

LocalField envelope(const BeamGeometry& g, double x, double y, double z) {
  const double r2 = x * x + y * y;
  const double zr1 = z / g.rayleigh1();
  const double zr2 = z / g.rayleigh2();
  const double g1 = 1.0 + zr1 * zr1;
  const double g2 = 1.0 + zr2 * zr2;
  LocalField out;
  out.f1 = std::exp(-r2 / (g.w1 * g.w1 * g1)) / std::sqrt(g1);
  out.f2 = std::exp(-r2 / (g.w2 * g.w2 * g2)) / std::sqrt(g2);
  out.omega_local = g.omega * out.f1 * out.f2;
  out.delta_local = g.delta0 + g.delta1 * out.f1 * out.f1 + g.delta2 * out.f2 * out.f2;
  return out;
}

double nominal_pulse_time(const BeamGeometry& g, PulseTarget target) {
  return (target == PulseTarget::TwoPi ? 2.0 : 1.0) * pi / g.omega;
}

namespace {

// Probability to remain in |1> at position r, generalized Rabi frequency in
// the oscillation argument. Reduces to the cos^2 + (delta/omega_gen)^2 sin^2
// bracket with argument omega t f / 2 when delta vanishes.
double p_stay(const BeamGeometry& g, double x, double y, double z, double t) {
  const LocalField f = envelope(g, x, y, z);
  const double w2 = f.omega_local * f.omega_local;
  const double d2 = f.delta_local * f.delta_local;
  const double gen = std::sqrt(w2 + d2);
  const double s = std::sin(0.5 * gen * t);
  return 1.0 - (w2 / (w2 + d2)) * s * s;
}

double p_rydberg(const BeamGeometry& g, double x, double y, double z, double t) {
  return 1.0 - p_stay(g, x, y, z, t);
}

double wrapped_phase(const BeamGeometry& g, double x, double y, double z, double t) {
  const LocalField f = envelope(g, x, y, z);
  const double gen = std::hypot(f.omega_local, f.delta_local);
  // principal branch measures the deviation from the ideal +-1 amplitude
  return -std::atan(f.delta_local / gen * std::tan(0.5 * gen * t));
}

}  // namespace

PulseStats avg_population_after_pulse(const BeamGeometry& g, const TrapDistribution& d,
                                      double t, double target_pop, int order) {
  if (t < 0) throw UsageError("avg_population_after_pulse: t must be >= 0");
  auto f = [&](double x, double y, double z) { return p_stay(g, x, y, z, t); };
  auto f2 = [&](double x, double y, double z) {
    const double p = p_stay(g, x, y, z, t);
    return p * p;
  };
  const double mean = gaussian_mean_checked(f, d.sigma, d.sigma, d.sigma_z, order);
  const double mean_sq = gaussian_mean_checked(f2, d.sigma, d.sigma, d.sigma_z, order);
  double variance = target_pop * target_pop + mean_sq - 2.0 * target_pop * mean;
  if (variance < 0.0 && variance > -1e-12) variance = 0.0;
  return {mean, variance};
}

double pi_pulse_rydberg_population(const BeamGeometry& g, const TrapDistribution& d,
                                   double t, int order) {
  auto f = [&](double x, double y, double z) { return p_rydberg(g, x, y, z, t); };
  return gaussian_mean_checked(f, d.sigma, d.sigma, d.sigma_z, order);
}

PhaseStats avg_phase_after_pulse(const BeamGeometry& g, const TrapDistribution& d,
                                 double t, int order) {
  auto phi = [&](double x, double y, double z) { return wrapped_phase(g, x, y, z, t); };
  auto phi2 = [&](double x, double y, double z) {
    const double p = wrapped_phase(g, x, y, z, t);
    return p * p;
  };
  auto omc = [&](double x, double y, double z) {
    return 1.0 - std::cos(wrapped_phase(g, x, y, z, t));
  };
  const double mean = gaussian_mean_checked(phi, d.sigma, d.sigma, d.sigma_z, order);
  const double mean_sq = gaussian_mean_checked(phi2, d.sigma, d.sigma, d.sigma_z, order);
  const double one_minus_cos = gaussian_mean_checked(omc, d.sigma, d.sigma, d.sigma_z, order);
  return {mean, one_minus_cos, std::sqrt(std::max(mean_sq - mean * mean, 0.0))};
}

double optimize_pulse_time(const BeamGeometry& g, const TrapDistribution& d,
                           PulseTarget target, int order, double rel_tol) {
  const double t0 = nominal_pulse_time(g, target);
  auto objective = [&](double t) {
    if (target == PulseTarget::TwoPi)
      return std::abs(1.0 - gaussian_mean(
                                [&](double x, double y, double z) { return p_stay(g, x, y, z, t); },
                                d.sigma, d.sigma, d.sigma_z, order));
    return std::abs(1.0 - gaussian_mean(
                              [&](double x, double y, double z) { return p_rydberg(g, x, y, z, t); },
                              d.sigma, d.sigma, d.sigma_z, order));
  };
  // golden-section search on a bracket around the nominal time
  double a = 0.90 * t0, b = 1.30 * t0;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double e = a + inv_phi * (b - a);
  double fc = objective(c), fe = objective(e);
  while (b - a > rel_tol * t0) {
    if (fc < fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + inv_phi * (b - a);
      fe = objective(e);
    }
  }
  return 0.5 * (a + b);
}

ScalingExponents scaling_exponent_check(const BeamGeometry& g, double sigma_lo,
                                        double sigma_hi, int n_points, int order) {
  if (!(sigma_lo > 0 && sigma_hi > sigma_lo && n_points >= 3))
    throw UsageError("scaling_exponent_check: need 0 < lo < hi and >= 3 points");
  const double t = nominal_pulse_time(g, PulseTarget::TwoPi);
  std::vector<double> lx, l_std, l_var;
  for (int i = 0; i < n_points; ++i) {
    const double s =
        sigma_lo * std::pow(sigma_hi / sigma_lo, static_cast<double>(i) / (n_points - 1));
    const TrapDistribution dist{s, 0.0};
    const auto stats = avg_population_after_pulse(g, dist, t, 1.0, order);
    lx.push_back(std::log(s / g.w1));
    l_var.push_back(std::log(stats.variance));
    l_std.push_back(0.5 * std::log(stats.variance));
  }
  // least-squares slope
  auto slope = [&](const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto n = static_cast<double>(lx.size());
    for (size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += y[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  return {slope(l_std), slope(l_var)};
}

EscapeEstimate monte_carlo_escape(double escape_distance, double t_drop,
                                  double temperature, double mass,
                                  std::uint64_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw UsageError("monte_carlo_escape: need at least one sample");
  const double v_escape = escape_distance / t_drop;
  const double sigma_v = std::sqrt(constants::k_boltzmann * temperature / mass);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> vel(0.0, sigma_v);
  std::uint64_t escapes = 0;
  const double ve2 = v_escape * v_escape;
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    const double vx = vel(rng);
    const double vy = vel(rng);
    if (vx * vx + vy * vy >= ve2) ++escapes;
  }
  const double p = static_cast<double>(escapes) / static_cast<double>(n_samples);
  const double se = std::sqrt(std::max(p * (1.0 - p), 1.0 / static_cast<double>(n_samples)) /
                              static_cast<double>(n_samples));
  return {p, se, escapes, n_samples};
}

}  // namespace rydsim
