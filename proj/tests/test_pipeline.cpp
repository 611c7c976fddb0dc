#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "rydsim/fitting.hpp"
#include "rydsim/pipeline.hpp"
#include "test_helpers.hpp"

using namespace rydsim;

namespace {

ErrorBudget reference_budget() { return assemble_budget(PhysicalParams{}); }

ErrorBudget zero_budget() {
  return ErrorBudget{};  // every channel strength exactly zero
}

std::vector<double> theta_grid(int n) {
  std::vector<double> x(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = 2 * pi * i / n;
  return x;
}

}  // namespace

TEST_CASE("noiseless pipeline produces the exact Bell state") {
  for (Mode mode : {Mode::Full, Mode::NoSpam, Mode::CzOnly}) {
    const BellResult r = run_bell(build_sequence(zero_budget(), mode));
    CHECK(std::abs(r.f_direct - 1.0) < 1e-12);
    CHECK(r.populations[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.populations[3] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.coherence == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.f_experimental == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("zero budget builds an identity-only error sequence") {
  const ChannelSequence seq = build_sequence(zero_budget(), Mode::Full);
  for (const auto& step : seq.steps) {
    if (const auto* ch = std::get_if<ChannelStep>(&step)) {
      if (ch->spec.kind == ChannelKind::MicrowaveHalfPi) continue;  // coherent pulse
      CHECK(ch->spec.epsilon < 1e-9);
    }
  }
}

TEST_CASE("sequence multiplicities match the reference pulse accounting") {
  const ChannelSequence seq = build_sequence(reference_budget(), Mode::Full);
  int uwave = 0, readout = 0, pumping = 0, control_pi_sets = 0;
  for (const auto& step : seq.steps) {
    const auto* ch = std::get_if<ChannelStep>(&step);
    if (ch == nullptr) continue;
    if (ch->spec.kind == ChannelKind::MicrowaveHalfPi) {
      CHECK(ch->spec.assignment == Assignment::Both);
      ++uwave;
    }
    if (ch->spec.kind == ChannelKind::Attenuation && ch->label.find("readout") == 0) ++readout;
    if (ch->spec.kind == ChannelKind::Attenuation && ch->label.find("pumping") != std::string::npos)
      ++pumping;
    if (ch->label.find("Rydberg laser dephasing") != std::string::npos) ++control_pi_sets;
  }
  CHECK(uwave == 4);      // initial, two in the local rotation, parity
  CHECK(readout == 2);    // initial and final readout, per atom
  CHECK(pumping == 1);    // per atom
  CHECK(control_pi_sets == 2);  // two control pi pulses
}

TEST_CASE("cz_only drops SPAM and single-qubit channels") {
  const ChannelSequence seq = build_sequence(reference_budget(), Mode::CzOnly);
  for (const auto& step : seq.steps) {
    const auto* ch = std::get_if<ChannelStep>(&step);
    if (ch == nullptr) continue;
    if (ch->stage == Stage::StatePrep || ch->stage == Stage::Measurement ||
        ch->stage == Stage::LocalRotation)
      CHECK(ch->spec.epsilon == 0.0);
  }
  CHECK(seq.eps_measurement == 0.0);
}

TEST_CASE("pipeline fidelities reproduce the reference cumulative values") {
  const ErrorBudget budget = reference_budget();
  const BellResult cz = run_bell(build_sequence(budget, Mode::CzOnly));
  const BellResult nospam = run_bell(build_sequence(budget, Mode::NoSpam));
  const BellResult full = run_bell(build_sequence(budget, Mode::Full));

  CHECK(std::abs(cz.f_direct - 0.887) < 0.015);
  CHECK(std::abs(nospam.f_direct - 0.877) < 0.015);
  CHECK(std::abs(full.f_direct - 0.853) < 0.015);

  // mode nesting holds exactly
  CHECK(full.f_direct <= nospam.f_direct);
  CHECK(nospam.f_direct <= cz.f_direct);

  // Bell observables of the full pipeline
  CHECK(std::abs(0.5 * (full.populations[0] + full.populations[3]) - 0.47) < 0.02);
  CHECK(std::abs(full.coherence - 0.39) < 0.02);
  CHECK(std::abs(full.f_experimental - full.f_direct) < 0.01);
}

TEST_CASE("per-channel fidelity degradation is monotonic") {
  const double base[] = {0.0, 0.5, 1.0, 2.0};
  auto fidelity_with = [](auto setter) {
    PhysicalParams p;
    setter(p);
    return run_bell(build_sequence(assemble_budget(p), Mode::Full)).f_direct;
  };
  auto check_monotone = [&](auto scale_param) {
    double prev = 2.0;
    for (double factor : base) {
      const double f = fidelity_with([&](PhysicalParams& p) { scale_param(p, factor); });
      CHECK(f <= prev + 1e-12);
      prev = f;
    }
  };
  check_monotone([](PhysicalParams& p, double k) { p.eps_uwave *= k; });
  check_monotone([](PhysicalParams& p, double k) { p.eps_stark *= k; });
  check_monotone([](PhysicalParams& p, double k) { p.eps_readout *= k; });
  check_monotone([](PhysicalParams& p, double k) { p.eps_pumping *= k; });
  check_monotone([](PhysicalParams& p, double k) { p.eps_position *= k; });
  check_monotone([](PhysicalParams& p, double k) { p.eps_laser_noise *= k; });
  check_monotone([](PhysicalParams& p, double k) { p.eps_ryd_dephasing_free *= k; });
  check_monotone([](PhysicalParams& p, double k) { p.eps_ryd_dephasing_blockaded *= k; });
  check_monotone([](PhysicalParams& p, double k) { p.eps_crosstalk *= k; });
  check_monotone([](PhysicalParams& p, double k) { p.temperature *= std::max(k, 1e-6); });
}

TEST_CASE("permuting channels within the C_Z stage moves F by less than 1e-3") {
  const ErrorBudget budget = reference_budget();
  const ChannelSequence seq = build_sequence(budget, Mode::Full);
  const double f_ref = run_bell(seq).f_direct;

  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 5; ++trial) {
    ChannelSequence shuffled = seq;
    std::vector<size_t> cz_channel_indices;
    for (size_t i = 0; i < shuffled.steps.size(); ++i)
      if (const auto* ch = std::get_if<ChannelStep>(&shuffled.steps[i]))
        if (ch->stage == Stage::Cz) cz_channel_indices.push_back(i);
    std::vector<SequenceStep> pool;
    for (size_t i : cz_channel_indices) pool.push_back(shuffled.steps[i]);
    std::shuffle(pool.begin(), pool.end(), rng);
    for (size_t k = 0; k < cz_channel_indices.size(); ++k)
      shuffled.steps[cz_channel_indices[k]] = pool[k];
    const double f = run_bell(shuffled).f_direct;
    CHECK(std::abs(f - f_ref) < 1e-3);
  }
}

TEST_CASE("sector bookkeeping conserves total probability") {
  LossyState st = LossyState::initial_11();
  run_sequence(st, build_sequence(reference_budget(), Mode::Full));
  CHECK(st.total_trace() == doctest::Approx(1.0).epsilon(1e-9));
  const auto p = outcome_probabilities(st, LossMap::DarkAsOne, 1.5e-4);
  CHECK(p[0] + p[1] + p[2] + p[3] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("plain compose path matches the both-present sector") {
  const ChannelSequence seq = build_sequence(reference_budget(), Mode::Full);
  const auto steps = to_process_steps(seq);
  const TwoQubitState via_compose = compose(steps, TwoQubitState::basis(1, 1));
  LossyState st = LossyState::initial_11();
  run_sequence(st, seq);
  CHECK(rydsim::testing::max_abs_diff(via_compose.rho, st.both) < 1e-12);
}

TEST_CASE("outcome probabilities: routing and confusion") {
  TwoQubitState plain = TwoQubitState::basis(0, 1);
  const auto p = outcome_probabilities(plain, LossMap::DarkAsOne, 0.0);
  CHECK(p[1] == doctest::Approx(1.0));

  TwoQubitState lossy = TwoQubitState::basis(0, 0);
  lossy.rho *= 0.99;  // 0.01 unattributed deficit
  const auto q = outcome_probabilities(lossy, LossMap::DarkAsOne, 0.0);
  CHECK(q[3] == doctest::Approx(0.01));
  CHECK(q[0] == doctest::Approx(0.99));
  const auto qz = outcome_probabilities(lossy, LossMap::DarkAsZero, 0.0);
  CHECK(qz[0] == doctest::Approx(1.0));

  // full confusion washes out all outcome information
  const auto u = outcome_probabilities(plain, LossMap::DarkAsOne, 0.5);
  for (double v : u) CHECK(v == doctest::Approx(0.25));
}

TEST_CASE("sector-resolved outcomes read the lost atom as dark") {
  LossyState st;
  st.both = 0.9 * TwoQubitState::basis(0, 0).rho;
  st.control_lost(0, 0) = 0.04;  // control gone, target in |0>
  st.control_lost(1, 1) = 0.02;
  st.target_lost(0, 0) = 0.03;   // target gone, control in |0>
  st.both_lost = 0.01;
  const auto p = outcome_probabilities(st, LossMap::DarkAsOne, 0.0);
  CHECK(p[0] == doctest::Approx(0.9));
  CHECK(p[1] == doctest::Approx(0.03));
  CHECK(p[2] == doctest::Approx(0.04));
  CHECK(p[3] == doctest::Approx(0.02 + 0.01));
}

TEST_CASE("parity scan: ideal Bell gives a unit-amplitude cosine in 2 phi") {
  const BellResult r = run_bell(build_sequence(zero_budget(), Mode::Full));
  const SinusoidFit fit = fit_parity(r.parity.phi, r.parity.value);
  CHECK(fit.amplitude == doctest::Approx(1.0).epsilon(1e-9));

  // fully dephased Bell-diagonal mixture has no parity fringe
  LossyState mixed;
  mixed.both = Matrix4c::Zero();
  mixed.both(0, 0) = 0.5;
  mixed.both(3, 3) = 0.5;
  const auto grid = theta_grid(64);
  const ParityCurve curve = parity_scan(mixed, grid, LossMap::DarkAsOne, 0.0);
  CHECK(fit_parity(curve.phi, curve.value).amplitude < 1e-12);
}

TEST_CASE("full-budget parity amplitude reproduces 2C near 0.78") {
  const BellResult r = run_bell(build_sequence(reference_budget(), Mode::Full));
  CHECK(std::abs(2 * r.coherence - 0.78) < 0.04);
}

TEST_CASE("renormalized fidelity divides out the trace deficit") {
  BellOptions opts;
  opts.renormalize_fidelity = true;
  const ChannelSequence seq = build_sequence(reference_budget(), Mode::Full);
  const BellResult plain = run_bell(seq);
  const BellResult renorm = run_bell(seq, opts);
  CHECK(renorm.f_direct > plain.f_direct);
  CHECK(renorm.f_direct == doctest::Approx(plain.f_direct / plain.rho_out.trace()).epsilon(1e-6));
}

TEST_CASE("ramsey amplitude: ideal and monotone in the microwave error") {
  const auto grid = theta_grid(32);
  CHECK(simulate_ramsey(0.0, 0.0, grid) == doctest::Approx(0.5).epsilon(1e-12));
  double prev = 1.0;
  for (double eps : {0.0, 0.001, 0.0028, 0.01, 0.05}) {
    const double amp = simulate_ramsey(eps, 0.0, grid);
    CHECK(amp < prev);
    prev = amp;
  }
}

TEST_CASE("ramsey contrast with SPAM is consistent with the measured pi-pulse amplitude") {
  const auto grid = theta_grid(32);
  RamseyContext ctx{0.0025, 0.005, 1.5e-4, LossMap::DarkAsOne};
  const double amp = simulate_ramsey(0.0028, 0.0, grid, ctx);
  CHECK(std::abs(2 * amp - 0.988) < 0.02);
}

TEST_CASE("epsilon extraction round trip") {
  const auto grid = theta_grid(32);
  RamseyContext ctx{0.0025, 0.005, 1.5e-4, LossMap::DarkAsOne};
  auto model = [&](double eps) { return simulate_ramsey(eps, 0.0, grid, ctx); };
  const double target_amp = model(0.0028);
  const double recovered = extract_epsilon(target_amp, model, 1e-9);
  CHECK(std::abs(recovered - 0.0028) < 1e-5);

  CHECK(extract_epsilon(model(0.0), model) == doctest::Approx(0.0).epsilon(1e-5));
  CHECK_THROWS_AS(extract_epsilon(model(0.0) + 0.01, model), UsageError);
}

TEST_CASE("eye diagram: ideal curves have unit amplitude and pi phase opposition") {
  ChannelStrengths zero{};
  const auto grid = theta_grid(32);
  const EyeCurve blockaded = simulate_eye_diagram(zero, true, grid, false);
  const EyeCurve open = simulate_eye_diagram(zero, false, grid, false);
  CHECK(blockaded.amplitude == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(open.amplitude == doctest::Approx(1.0).epsilon(1e-12));
  double dphi = std::fmod(std::abs(blockaded.phase - open.phase), 2 * pi);
  CHECK(dphi == doctest::Approx(pi).epsilon(1e-9));
}

TEST_CASE("eye diagram amplitudes land in the measured windows") {
  const ErrorBudget budget = reference_budget();
  const auto grid = theta_grid(32);
  const EyeCurve blockaded = simulate_eye_diagram(budget.strengths, true, grid);
  const EyeCurve open = simulate_eye_diagram(budget.strengths, false, grid);
  CHECK(std::abs(blockaded.amplitude - 0.91) < 0.06);
  CHECK(std::abs(open.amplitude - 0.85) < 0.04);
  CHECK(open.amplitude < blockaded.amplitude);
}

TEST_CASE("sequence variants change the result but stay in the same region") {
  const ErrorBudget budget = reference_budget();
  const double f_default = run_bell(build_sequence(budget, Mode::Full)).f_direct;
  SequenceVariants controlled;
  controlled.target_loss_controlled = true;
  const double f_controlled = run_bell(build_sequence(budget, Mode::Full, controlled)).f_direct;
  SequenceVariants lossy_xt;
  lossy_xt.crosstalk_as_loss = true;
  const double f_lossy_xt = run_bell(build_sequence(budget, Mode::Full, lossy_xt)).f_direct;
  CHECK(f_controlled != f_default);
  CHECK(f_lossy_xt != f_default);
  CHECK(std::abs(f_controlled - f_default) < 0.02);
  CHECK(std::abs(f_lossy_xt - f_default) < 0.02);
}

TEST_CASE("mode parsing") {
  CHECK(mode_from_string("full") == Mode::Full);
  CHECK(mode_from_string("no_spam") == Mode::NoSpam);
  CHECK(mode_from_string("cz_only") == Mode::CzOnly);
  CHECK_THROWS_AS(mode_from_string("bogus"), UsageError);
}
