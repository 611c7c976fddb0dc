#include "rydsim/coherence.hpp"

#include <cmath>
#include <vector>

namespace rydsim {

namespace {

constexpr double kWeightCut = 19.52;  // exp(-19.52) ~ 3e-9 per-axis tail

struct AxisGrid {
  std::vector<double> weight;  // normalized Boltzmann factors
  std::vector<double> energy;  // n * omega
};

AxisGrid axis_grid(double beta, double omega) {
  const double x = beta * omega;
  const int n_max = static_cast<int>(std::ceil(kWeightCut / x)) + 1;
  AxisGrid g;
  g.weight.reserve(static_cast<size_t>(n_max));
  g.energy.reserve(static_cast<size_t>(n_max));
  const double norm = 1.0 - std::exp(-x);
  for (int n = 0; n < n_max; ++n) {
    g.weight.push_back(norm * std::exp(-x * n));
    g.energy.push_back(omega * n);
  }
  return g;
}

// f(s) accumulated over the vibrational lattice with s = n . omega.
template <typename F>
double thermal_sum(const ThermalDriveParams& p, F&& f) {
  const double beta = p.beta();
  const AxisGrid gx = axis_grid(beta, p.omega_trap[0]);
  const AxisGrid gy = axis_grid(beta, p.omega_trap[1]);
  const AxisGrid gz = axis_grid(beta, p.omega_trap[2]);
  const double total = static_cast<double>(gx.weight.size()) * gy.weight.size() * gz.weight.size();
  if (total > 3e8)
    throw ConvergenceError("thermal_sum: vibrational lattice too large; raise omega_trap or T");
  double acc = 0.0;
  for (size_t ix = 0; ix < gx.weight.size(); ++ix) {
    const double wx = gx.weight[ix];
    const double sx = gx.energy[ix];
    for (size_t iy = 0; iy < gy.weight.size(); ++iy) {
      const double wxy = wx * gy.weight[iy];
      const double sxy = sx + gy.energy[iy];
      for (size_t iz = 0; iz < gz.weight.size(); ++iz)
        acc += wxy * gz.weight[iz] * f(sxy + gz.energy[iz]);
    }
  }
  return acc;
}

// (1/24) int_0^inf s^4 e^-s trig(c s^2) ds by composite Simpson.
struct ReducedIntegrals {
  double cosine;
  double sine;
};

ReducedIntegrals reduced_integrals(double c) {
  const double s_max = 50.0;
  const int n = 20000;  // even
  const double h = s_max / n;
  double acc_c = 0.0, acc_s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double s = i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double base = w * s * s * s * s * std::exp(-s);
    acc_c += base * std::cos(c * s * s);
    acc_s += base * std::sin(c * s * s);
  }
  return {acc_c * h / 3.0 / 24.0, acc_s * h / 3.0 / 24.0};
}

double c_of_m(const ThermalDriveParams& p, double m) {
  const double ob = p.omega * p.beta();
  return m * pi * p.delta_ls_bar * p.delta_ls_bar / (4.0 * ob * ob);
}

}  // namespace

bool ThermalDriveParams::in_thermal_limit() const {
  double om = 0.0;
  for (double o : omega_trap) om = std::max(om, o);
  return beta() * om < 1.0;
}

void validate(const ThermalDriveParams& p) {
  if (!(p.omega > 0) || !(p.delta_ls_bar > 0) || !(p.temperature > 0))
    throw ValidationError("thermal drive parameters must be positive");
  for (double o : p.omega_trap)
    if (!(o > 0)) throw ValidationError("trap frequencies must be positive");
}

double rabi_population_exact(const ThermalDriveParams& p, double t) {
  validate(p);
  const double w2 = p.omega * p.omega;
  const double half_dls = 0.5 * p.delta_ls_bar;
  return thermal_sum(p, [&](double s) {
    const double d1 = half_dls * s;
    const double gen2 = w2 + d1 * d1;
    const double sn = std::sin(0.5 * std::sqrt(gen2) * t);
    return (w2 / gen2) * sn * sn;
  });
}

Quadratures am_exact_sum(const ThermalDriveParams& p, double m) {
  validate(p);
  if (m < 0) throw UsageError("am_exact_sum: m must be >= 0");
  const double t_m = 2.0 * pi * m / p.omega;
  const double w2 = p.omega * p.omega;
  const double half_dls = 0.5 * p.delta_ls_bar;
  double am = 0.0, amp = 0.0;
  am = thermal_sum(p, [&](double s) {
    const double d1 = half_dls * s;
    return (d1 * d1 / (2.0 * w2)) * std::cos(d1 * d1 / (2.0 * p.omega) * t_m);
  });
  amp = thermal_sum(p, [&](double s) {
    const double d1 = half_dls * s;
    return (d1 * d1 / (2.0 * w2)) * std::sin(d1 * d1 / (2.0 * p.omega) * t_m);
  });
  return {am, amp};
}

double semiclassical_a0(const ThermalDriveParams& p) {
  validate(p);
  const double ob = p.omega * p.beta();
  return 1.5 * p.delta_ls_bar * p.delta_ls_bar / (ob * ob);
}

AmResult semiclassical_am(const ThermalDriveParams& p, double m) {
  validate(p);
  if (m < 0) throw UsageError("semiclassical_am: m must be >= 0");
  const double a0 = semiclassical_a0(p);
  const double prefactor = a0 / 1.5 * (24.0 / 16.0);  // dls^2/(16 omega^2 beta^2) * 24
  const auto red = reduced_integrals(c_of_m(p, m));
  AmResult r;
  r.a_m = prefactor * red.cosine;
  r.a_m_prime = prefactor * red.sine;
  const double ob = p.omega * p.beta();
  const double ratio6 = std::pow(p.delta_ls_bar / ob, 6);
  r.a_m_expansion = a0 - (315.0 * pi * pi * m * m / 4.0) * ratio6;
  const double t = 2.0 * pi * m / p.omega;
  r.a_m_prime_expansion =
      (45.0 / 8.0) * std::pow(p.delta_ls_bar, 4) / (std::pow(p.omega, 3) * std::pow(p.beta(), 4)) * t;
  return r;
}

T2Rabi t2_rabi(const ThermalDriveParams& p) {
  validate(p);
  const double beta = p.beta();
  const double dls2 = p.delta_ls_bar * p.delta_ls_bar;
  T2Rabi out;
  out.closed_form = std::sqrt(8.0 * (1.0 - 1.0 / std::exp(1.0)) / 105.0) * p.omega * beta * beta / dls2;

  // root of the cosine-weighted integral form, located in c then refined on
  // integer m with linear interpolation
  const double target = 1.0 / std::exp(1.0);
  double lo = 0.0, hi = 1.0;
  while (reduced_integrals(hi).cosine > target) hi *= 2.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (reduced_integrals(mid).cosine > target ? lo : hi) = mid;
  }
  const double c_root = 0.5 * (lo + hi);
  const double ob = p.omega * beta;
  const double m_real = c_root * 4.0 * ob * ob / (pi * dls2);
  double m_cross = m_real;
  if (m_real >= 1.0) {
    const double m_lo = std::floor(m_real);
    const double m_hi = m_lo + 1.0;
    const double g_lo = reduced_integrals(c_of_m(p, m_lo)).cosine;
    const double g_hi = reduced_integrals(c_of_m(p, m_hi)).cosine;
    if (g_lo != g_hi) m_cross = m_lo + (g_lo - target) / (g_lo - g_hi);
  }
  out.integral_root = 2.0 * pi * m_cross / p.omega;
  return out;
}

double t2_ramsey_static(double temperature, double anchor_t2, double anchor_temperature) {
  if (!(temperature > 0)) throw UsageError("t2_ramsey_static: temperature must be positive");
  return anchor_t2 * anchor_temperature / temperature;
}

}  // namespace rydsim
