// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Run as: acceptance <path-to-default-config>

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "rydsim/beam.hpp"
#include "rydsim/budget.hpp"
#include "rydsim/coherence.hpp"
#include "rydsim/config.hpp"
#include "rydsim/fitting.hpp"
#include "rydsim/pipeline.hpp"
#include "rydsim/quadrature.hpp"
#include "test_helpers.hpp"

using namespace rydsim;

namespace {

struct Criterion {
  std::string detail;
  bool ok = true;

  void check(bool cond, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what + (cond ? " ok" : " FAILED");
    ok = ok && cond;
  }
  void check_close(double value, double expected, double tol, const std::string& what) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s = %.5g (want %.5g +- %.2g)", what.c_str(), value, expected,
                  tol);
    check(std::abs(value - expected) <= tol, buf);
  }
};

int report(int index, const std::string& title, const Criterion& c) {
  std::printf("[%s] criterion %2d: %s  --  %s\n", c.ok ? "PASS" : "FAIL", index, title.c_str(),
              c.detail.c_str());
  return c.ok ? 0 : 1;
}

std::vector<double> theta_grid(int n) {
  std::vector<double> x(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = 2 * pi * i / n;
  return x;
}

double a0_3d_quadrature(const ThermalDriveParams& p, int order) {
  const GaussRule rule = gauss_laguerre(order);
  const double beta = p.beta();
  double integral = 0.0;
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j)
      for (int k = 0; k < order; ++k) {
        const double s = rule.nodes(i) + rule.nodes(j) + rule.nodes(k);
        integral += rule.weights(i) * rule.weights(j) * rule.weights(k) * s * s;
      }
  return p.delta_ls_bar * p.delta_ls_bar / (8.0 * p.omega * p.omega * beta * beta) * integral;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string config_path = argc > 1 ? argv[1] : "configs/default.cfg";
  const ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
  const PhysicalParams params = cfg.physical_params();
  const ErrorBudget budget = assemble_budget(params);
  int failures = 0;

  // 1. Table reproduction, calculated rows
  {
    Criterion c;
    c.check_close(budget.strengths.doppler, 0.013, 0.001, "doppler");
    c.check_close(budget.strengths.lifetime_control, 0.0075, 0.0002, "lifetime control");
    c.check_close(budget.strengths.lifetime_target, 8.5e-4, 0.3e-4, "lifetime target");
    c.check_close(budget.scattering_free, 0.0023, 0.0001, "7p scattering free");
    c.check_close(budget.strengths.scattering_per_beam, 0.0012, 0.0001, "7p scattering blockaded");
    c.check_close(budget.strengths.blockade_leakage, 0.001, 0.0005, "blockade leakage");
    c.check_close(budget.eps_magnetic, 1e-4, 0.3e-4, "magnetic dephasing");
    c.check_close(budget.t2_doppler, 6e-6, 0.2e-6, "T2 Doppler");
    c.check_close(budget.t2_magnetic, 1e-4, 1e-5, "T2 magnetic");
    failures += report(1, "error-budget calculated rows", c);
  }

  // Bell pipeline runs shared by criteria 2 and 3
  const BellOptions options = cfg.bell_options();
  const BellResult cz = run_bell(build_sequence(budget, Mode::CzOnly), options);
  const BellResult nospam = run_bell(build_sequence(budget, Mode::NoSpam), options);
  const BellResult full = run_bell(build_sequence(budget, Mode::Full), options);

  // 2. pipeline fidelities
  {
    Criterion c;
    c.check_close(cz.f_direct, 0.887, 0.015, "F_Bell^CZ");
    c.check_close(nospam.f_direct, 0.877, 0.015, "F_Bell^-SPAM");
    c.check_close(full.f_direct, 0.853, 0.015, "F_Bell");
    c.check(full.f_direct <= nospam.f_direct && nospam.f_direct <= cz.f_direct, "mode nesting");
    failures += report(2, "Bell pipeline fidelities", c);
  }

  // 3. Bell observables
  {
    Criterion c;
    c.check_close(0.5 * (full.populations[0] + full.populations[3]), 0.47, 0.02, "(P00+P11)/2");
    c.check_close(full.coherence, 0.39, 0.02, "C");
    c.check_close(full.f_experimental, full.f_direct, 0.01, "F_exp vs F_direct");
    failures += report(3, "Bell observables", c);
  }

  // 4. eye diagram
  {
    Criterion c;
    const auto grid = theta_grid(32);
    const EyeCurve blockaded = simulate_eye_diagram(budget.strengths, true, grid);
    const EyeCurve open = simulate_eye_diagram(budget.strengths, false, grid);
    c.check_close(open.amplitude, 0.85, 0.04, "non-blockaded amplitude");
    c.check_close(blockaded.amplitude, 0.91, 0.06, "blockaded amplitude");
    ChannelStrengths zero{};
    const EyeCurve ib = simulate_eye_diagram(zero, true, grid, false);
    const EyeCurve io = simulate_eye_diagram(zero, false, grid, false);
    const double dphi = std::fmod(std::abs(ib.phase - io.phase), 2 * pi);
    c.check(std::abs(dphi - pi) < 1e-9 && std::abs(ib.amplitude - 1) < 1e-9 &&
                std::abs(io.amplitude - 1) < 1e-9,
            "ideal pi opposition");
    failures += report(4, "eye diagram amplitudes", c);
  }

  // 5. position averaging
  {
    Criterion c;
    const BeamGeometry geom = cfg.beam_geometry();
    const TrapDistribution dist = cfg.trap_distribution();
    const double err_2pi =
        1.0 - avg_population_after_pulse(geom, dist, nominal_pulse_time(geom, PulseTarget::TwoPi),
                                         1.0)
                  .mean;
    const double err_pi =
        1.0 - pi_pulse_rydberg_population(geom, dist, nominal_pulse_time(geom, PulseTarget::Pi));
    c.check_close(err_2pi, 0.006, 0.3 * 0.006, "2pi pulse error at sigma");
    c.check_close(err_pi, 0.0025, 0.3 * 0.0025, "pi pulse error at sigma");
    const ScalingExponents slopes = scaling_exponent_check(geom, 0.04e-6, 0.14e-6, 8);
    c.check_close(slopes.std_slope, 4.0, 0.3, "std scaling exponent");
    failures += report(5, "position-averaged pulse errors", c);
  }

  // 6. escape probability
  {
    Criterion c;
    const double closed = escape_probability_closed(
        params.escape_distance / params.trap_drop_time, params.temperature, params.atom_mass);
    c.check(closed < 1e-100, "closed form below 1e-100");
    const double v_half = std::sqrt(2 * constants::k_boltzmann * params.temperature *
                                    std::log(2.0) / params.atom_mass);
    const EscapeEstimate mc =
        monte_carlo_escape(v_half * params.trap_drop_time, params.trap_drop_time,
                           params.temperature, params.atom_mass, cfg.mc_samples(), cfg.mc_seed());
    c.check(std::abs(mc.probability - 0.5) <= 3.0 * mc.std_error,
            "MC within 3 sigma of closed form 0.5");
    failures += report(6, "trap escape probability", c);
  }

  // 7. coherence module
  {
    Criterion c;
    const ThermalDriveParams p = cfg.thermal_drive_params();
    const double a0 = semiclassical_a0(p);
    c.check(std::abs(a0_3d_quadrature(p, 24) - a0) / a0 < 1e-3, "a0 closed vs 3D quadrature");
    const T2Rabi t2 = t2_rabi(p);
    {
      char buf[128];
      std::snprintf(buf, sizeof buf, "T2 closed %.4g s vs integral 1/e root %.4g s (ratio %.3f)",
                    t2.closed_form, t2.integral_root, t2.integral_root / t2.closed_form);
      c.check(std::abs(t2.integral_root / t2.closed_form - 1.0) <= 0.10, buf);
    }
    const auto exact0 = am_exact_sum(p, 0.0);
    bool oracle_ok = std::abs(exact0.a_m - a0) / a0 < 0.10;
    const double m_root = t2.integral_root * p.omega / (2 * pi);
    for (double frac : {0.5, 1.0}) {
      const double m = std::floor(frac * m_root);
      const double sc = semiclassical_am(p, m).a_m / a0;
      const double ex = am_exact_sum(p, m).a_m / exact0.a_m;
      oracle_ok = oracle_ok && std::abs(ex - sc) < 0.10;
    }
    c.check(oracle_ok, "vibrational-sum oracle envelope vs semiclassical");
    c.check(t2_ramsey_static(cfg.ramsey_anchor_temperature(), cfg.ramsey_anchor_t2(),
                             cfg.ramsey_anchor_temperature()) == cfg.ramsey_anchor_t2(),
            "Ramsey anchor exact");
    failures += report(7, "driven-qubit coherence", c);
  }

  // 8. process-algebra properties
  {
    Criterion c;
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    const Process1Q one_q[] = {chi_attenuation(0.37), chi_dephasing(0.21),
                               chi_state_dependent_loss(0.43),
                               conjugate_z_frame(chi_microwave_half_pi(0.11), 0.83)};
    const Process2Q two_q[] = {chi_controlled_dephasing(0.4), chi_anticontrolled_dephasing(0.17),
                               chi_controlled_loss(0.29), chi_anticontrolled_loss(0.33)};
    for (int i = 0; i < 100; ++i) {
      const Matrix4c rho = rydsim::testing::random_density(rng);
      const Qubit q = (i % 2) ? Qubit::Control : Qubit::Target;
      worst = std::max(worst, rydsim::testing::max_abs_diff(
                                  apply_1q({rho}, one_q[i % 4], q).rho,
                                  rydsim::testing::kraus_apply_1q(rho, one_q[i % 4], q)));
      worst = std::max(worst, rydsim::testing::max_abs_diff(
                                  apply_2q({rho}, two_q[i % 4]).rho,
                                  rydsim::testing::kraus_apply_2q(rho, two_q[i % 4])));
    }
    c.check(worst < 1e-12, "dual-path Pauli-sum vs Kraus (100 random states)");

    bool psd_ok = true;
    for (int k = 0; k <= 10; ++k) {
      const double eps = k / 10.0;
      for (const Process1Q& p : {chi_attenuation(eps), chi_dephasing(eps),
                                 chi_state_dependent_loss(eps), chi_microwave_half_pi(eps)}) {
        Eigen::SelfAdjointEigenSolver<Matrix4c> es(p.chi, Eigen::EigenvaluesOnly);
        psd_ok = psd_ok && es.eigenvalues().minCoeff() > -1e-12;
      }
      for (const Process2Q& p :
           {chi_controlled_dephasing(eps), chi_anticontrolled_dephasing(eps),
            chi_controlled_loss(eps), chi_anticontrolled_loss(eps)}) {
        Eigen::SelfAdjointEigenSolver<Matrix16c> es(p.reshape(), Eigen::EigenvaluesOnly);
        psd_ok = psd_ok && es.eigenvalues().minCoeff() > -1e-12;
      }
    }
    c.check(psd_ok, "library chi PSD on the eps grid");

    const double f_ideal = run_bell(build_sequence(ErrorBudget{}, Mode::Full)).f_direct;
    c.check(std::abs(f_ideal - 1.0) < 1e-12, "noiseless pipeline F = 1");

    bool monotone = true;
    auto f_scaled = [&](auto setter) {
      PhysicalParams p2;
      setter(p2);
      return run_bell(build_sequence(assemble_budget(p2), Mode::Full), options).f_direct;
    };
    const double f_base = full.f_direct;
    monotone &= f_scaled([](PhysicalParams& p2) { p2.eps_uwave *= 2; }) <= f_base + 1e-12;
    monotone &= f_scaled([](PhysicalParams& p2) { p2.eps_stark *= 2; }) <= f_base + 1e-12;
    monotone &= f_scaled([](PhysicalParams& p2) { p2.eps_readout *= 2; }) <= f_base + 1e-12;
    monotone &= f_scaled([](PhysicalParams& p2) { p2.eps_pumping *= 2; }) <= f_base + 1e-12;
    monotone &= f_scaled([](PhysicalParams& p2) { p2.eps_position *= 2; }) <= f_base + 1e-12;
    monotone &= f_scaled([](PhysicalParams& p2) { p2.eps_laser_noise *= 2; }) <= f_base + 1e-12;
    monotone &=
        f_scaled([](PhysicalParams& p2) { p2.eps_ryd_dephasing_free *= 2; }) <= f_base + 1e-12;
    monotone &= f_scaled([](PhysicalParams& p2) { p2.eps_ryd_dephasing_blockaded *= 2; }) <=
                f_base + 1e-12;
    monotone &= f_scaled([](PhysicalParams& p2) { p2.eps_crosstalk *= 2; }) <= f_base + 1e-12;
    monotone &= f_scaled([](PhysicalParams& p2) { p2.temperature *= 2; }) <= f_base + 1e-12;
    c.check(monotone, "per-channel monotonic degradation");
    failures += report(8, "process-algebra properties", c);
  }

  // 9. inverse fitting
  {
    Criterion c;
    const auto grid = theta_grid(64);
    RamseyContext ctx{params.eps_readout, params.eps_pumping, params.eps_measurement,
                      options.loss_map};
    auto model = [&](double eps) { return simulate_ramsey(eps, 0.0, grid, ctx); };
    const double recovered = extract_epsilon(model(0.0028), model, 1e-9);
    c.check(std::abs(recovered - 0.0028) < 1e-5, "ramsey epsilon round trip");

    std::vector<double> synth;
    for (double x : grid) synth.push_back(0.013 + 0.78 * std::cos(2 * x + 0.4));
    const SinusoidFit fit = fit_parity(grid, synth);
    c.check(std::abs(fit.amplitude - 0.78) < 1e-12 && std::abs(fit.phase - 0.4) < 1e-12,
            "parity fitter exact on noise-free data");
    failures += report(9, "inverse fitting", c);
  }

  // 10. crosstalk and fill fraction
  {
    Criterion c;
    c.check_close(budget.crosstalk_omega_ratio, 0.12, 0.005, "Omega'/Omega");
    c.check_close(budget.crosstalk_amplitude, 0.023, 0.002, "suppressed amplitude");
    PhysicalParams filled = params;
    filled.fill_fraction = 0.55;
    filled.eps_crosstalk = crosstalk_fill_scaled(0.55);
    const double f_055 =
        run_bell(build_sequence(assemble_budget(filled), Mode::Full), options).f_direct;
    filled.fill_fraction = 1.0;
    filled.eps_crosstalk = crosstalk_fill_scaled(1.0);
    const double f_100 =
        run_bell(build_sequence(assemble_budget(filled), Mode::Full), options).f_direct;
    c.check_close(f_100 - f_055, -0.004, 0.002, "fill-fraction fidelity change");
    failures += report(10, "crosstalk and fill fraction", c);
  }

  std::printf("%d of 10 criteria failed\n", failures);
  return failures;
}
