#include "rydsim/pipeline.hpp"

#include <cmath>
#include <utility>

#include "rydsim/fitting.hpp"

namespace rydsim {

namespace {

Matrix2c trace_out_control(const Matrix4c& rho) {
  Matrix2c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i, j) = rho(i, j) + rho(2 + i, 2 + j);
  return out;
}

Matrix2c trace_out_target(const Matrix4c& rho) {
  Matrix2c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i, j) = rho(2 * i, 2 * j) + rho(2 * i + 1, 2 * j + 1);
  return out;
}

// partner state conditioned on the named atom being in |1>
Matrix2c conditional_on_control_one(const Matrix4c& rho) { return rho.block<2, 2>(2, 2); }

Matrix2c conditional_on_target_one(const Matrix4c& rho) {
  Matrix2c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i, j) = rho(2 * i + 1, 2 * j + 1);
  return out;
}

Matrix4c lift_1q(const Matrix2c& u, Qubit which) {
  Matrix4c out = Matrix4c::Zero();
  if (which == Qubit::Control) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = u(i, j) * Matrix2c::Identity();
  } else {
    out.block<2, 2>(0, 0) = u;
    out.block<2, 2>(2, 2) = u;
  }
  return out;
}

double real_trace(const Matrix2c& m) { return m.trace().real(); }

}  // namespace

Mode mode_from_string(const std::string& s) {
  if (s == "full") return Mode::Full;
  if (s == "no_spam") return Mode::NoSpam;
  if (s == "cz_only") return Mode::CzOnly;
  throw UsageError("unknown mode: " + s + " (expected full|no_spam|cz_only)");
}

double LossyState::total_trace() const {
  return both.trace().real() + control_lost.trace().real() + target_lost.trace().real() +
         both_lost;
}

LossyState LossyState::initial_11() {
  LossyState st;
  st.both(3, 3) = 1.0;
  return st;
}

Matrix2c microwave_rotation(double theta) {
  const Complex i(0, 1);
  Matrix2c base;
  base << 1, -1, 1, 1;  // pi/2 rotation, the coherent part of the microwave channel
  base /= std::sqrt(2.0);
  Matrix2c uz_minus = Matrix2c::Identity();
  uz_minus(1, 1) = std::exp(-i * theta);
  Matrix2c uz_plus = Matrix2c::Identity();
  uz_plus(1, 1) = std::exp(i * theta);
  return uz_minus * base * uz_plus;
}

TwoQubitState ideal_bell_state() {
  TwoQubitState s;
  Eigen::Vector4cd psi;
  psi << 1.0 / std::sqrt(2.0), 0, 0, -1.0 / std::sqrt(2.0);
  s.rho = psi * psi.adjoint();
  return s;
}

namespace {

void apply_channel_to_one_qubit(LossyState& st, const ChannelSpec& spec, Qubit which) {
  const Process1Q p = make_process_1q(spec);

  // loss transfers out of the both-present sector
  if (spec.kind == ChannelKind::Attenuation && spec.epsilon > 0.0) {
    if (which == Qubit::Control)
      st.control_lost += spec.epsilon * trace_out_control(st.both);
    else
      st.target_lost += spec.epsilon * trace_out_target(st.both);
  } else if (spec.kind == ChannelKind::StateDependentLoss && spec.epsilon > 0.0) {
    if (which == Qubit::Control)
      st.control_lost += spec.epsilon * conditional_on_control_one(st.both);
    else
      st.target_lost += spec.epsilon * conditional_on_target_one(st.both);
  }
  st.both = apply_1q({st.both}, p, which).rho;

  // the sector where this atom is still present; trace lost there is final
  Matrix2c& present = (which == Qubit::Control) ? st.target_lost : st.control_lost;
  const double before = real_trace(present);
  present = apply_1q_single(present, p);
  st.both_lost += before - real_trace(present);
}

void apply_channel(LossyState& st, const ChannelStep& step) {
  const ChannelSpec& spec = step.spec;
  if (is_two_qubit(spec.kind)) {
    const Process2Q p = make_process_2q(spec);
    if (spec.kind == ChannelKind::ControlledLoss && spec.epsilon > 0.0)
      st.target_lost(1, 1) += spec.epsilon * st.both(3, 3);
    else if (spec.kind == ChannelKind::AntiControlledLoss && spec.epsilon > 0.0)
      st.target_lost(0, 0) += spec.epsilon * st.both(1, 1);
    st.both = apply_2q({st.both}, p).rho;

    const Process1Q on_target = restrict_lost_control(p);
    double before = real_trace(st.control_lost);
    st.control_lost = apply_1q_single(st.control_lost, on_target);
    st.both_lost += before - real_trace(st.control_lost);

    const Process1Q on_control = restrict_lost_target(p);
    before = real_trace(st.target_lost);
    st.target_lost = apply_1q_single(st.target_lost, on_control);
    st.both_lost += before - real_trace(st.target_lost);
    return;
  }
  switch (spec.assignment) {
    case Assignment::Control:
      apply_channel_to_one_qubit(st, spec, Qubit::Control);
      break;
    case Assignment::Target:
      apply_channel_to_one_qubit(st, spec, Qubit::Target);
      break;
    case Assignment::Both:
      apply_channel_to_one_qubit(st, spec, Qubit::Control);
      apply_channel_to_one_qubit(st, spec, Qubit::Target);
      break;
    case Assignment::Joint:
      throw UsageError("single-qubit channel with joint assignment");
  }
}

void apply_unitary_1q(LossyState& st, const Matrix2c& u, Qubit which) {
  const Matrix4c lifted = lift_1q(u, which);
  st.both = lifted * st.both * lifted.adjoint();
  Matrix2c& present = (which == Qubit::Control) ? st.target_lost : st.control_lost;
  present = u * present * u.adjoint();
}

void apply_unitary_2q(LossyState& st, const Matrix4c& u) {
  st.both = u * st.both * u.adjoint();
  // lost sectors see the single-atom restriction (absent partner as |0>)
  const Process2Q p = process_from_unitary(u);
  const Process1Q on_target = restrict_lost_control(p);
  double before = real_trace(st.control_lost);
  st.control_lost = apply_1q_single(st.control_lost, on_target);
  st.both_lost += before - real_trace(st.control_lost);

  const Process1Q on_control = restrict_lost_target(p);
  before = real_trace(st.target_lost);
  st.target_lost = apply_1q_single(st.target_lost, on_control);
  st.both_lost += before - real_trace(st.target_lost);
}

}  // namespace

void apply_step(LossyState& st, const SequenceStep& step) {
  if (const auto* ch = std::get_if<ChannelStep>(&step))
    apply_channel(st, *ch);
  else if (const auto* u1 = std::get_if<UnitaryStep1Q>(&step))
    apply_unitary_1q(st, u1->u, u1->which);
  else
    apply_unitary_2q(st, std::get<UnitaryStep2Q>(step).u);
}

void run_sequence(LossyState& st, const ChannelSequence& seq) {
  for (const auto& step : seq.steps) apply_step(st, step);
}

std::vector<ProcessStep> to_process_steps(const ChannelSequence& seq) {
  std::vector<ProcessStep> out;
  for (const auto& step : seq.steps) {
    if (const auto* ch = std::get_if<ChannelStep>(&step)) {
      if (is_two_qubit(ch->spec.kind)) {
        out.push_back(TwoQubitStep{make_process_2q(ch->spec)});
      } else if (ch->spec.assignment == Assignment::Both) {
        out.push_back(OneQubitStep{make_process_1q(ch->spec), Qubit::Control});
        out.push_back(OneQubitStep{make_process_1q(ch->spec), Qubit::Target});
      } else {
        const Qubit q =
            ch->spec.assignment == Assignment::Control ? Qubit::Control : Qubit::Target;
        out.push_back(OneQubitStep{make_process_1q(ch->spec), q});
      }
    } else if (const auto* u1 = std::get_if<UnitaryStep1Q>(&step)) {
      out.push_back(OneQubitStep{process_from_unitary(u1->u), u1->which});
    } else {
      out.push_back(TwoQubitStep{process_from_unitary(std::get<UnitaryStep2Q>(step).u)});
    }
  }
  return out;
}

ChannelSequence build_sequence(const ErrorBudget& budget, Mode mode,
                               const SequenceVariants& variants) {
  const auto& s = budget.strengths;
  const ChannelKind target_loss = variants.target_loss_controlled
                                      ? ChannelKind::ControlledLoss
                                      : ChannelKind::AntiControlledLoss;
  const ChannelKind crosstalk_kind = variants.crosstalk_as_loss
                                         ? ChannelKind::AntiControlledLoss
                                         : ChannelKind::AntiControlledDephasing;
  const bool spam = mode == Mode::Full;
  const bool one_qubit_errors = mode != Mode::CzOnly;
  const double e_uw = one_qubit_errors ? s.uwave : 0.0;
  const double e_stark = one_qubit_errors ? s.stark : 0.0;
  const double e_readout = spam ? s.readout : 0.0;
  const double e_pumping = spam ? s.pumping : 0.0;
  // half of the control decay before the target pulse, half after
  const double half_lifetime = 1.0 - std::sqrt(1.0 - s.lifetime_control);

  ChannelSequence seq;
  seq.eps_measurement = spam ? s.measurement : 0.0;
  auto channel = [&seq](Stage stage, std::string label, ChannelKind kind, double eps,
                        Assignment assign, double angle = 0.0) {
    seq.steps.push_back(ChannelStep{stage, std::move(label), {kind, eps, angle, assign}});
  };

  // --- state preparation ---
  channel(Stage::StatePrep, "readout-1 loss", ChannelKind::Attenuation, e_readout,
          Assignment::Both);
  channel(Stage::StatePrep, "optical pumping loss", ChannelKind::Attenuation, e_pumping,
          Assignment::Both);
  channel(Stage::StatePrep, "global pi/2", ChannelKind::MicrowaveHalfPi, e_uw, Assignment::Both,
          0.0);

  // --- C_Z stage ---
  auto control_pi = [&](const std::string& tag) {
    channel(Stage::Cz, tag + ": 7p scattering beam 1", ChannelKind::StateDependentLoss,
            s.scattering_per_beam, Assignment::Control);
    channel(Stage::Cz, tag + ": 7p scattering beam 2", ChannelKind::StateDependentLoss,
            s.scattering_per_beam, Assignment::Control);
    channel(Stage::Cz, tag + ": atom position", ChannelKind::StateDependentLoss, s.position,
            Assignment::Control);
    channel(Stage::Cz, tag + ": laser noise", ChannelKind::StateDependentLoss, s.laser_noise,
            Assignment::Control);
    channel(Stage::Cz, tag + ": Rydberg laser dephasing", ChannelKind::Dephasing,
            s.ryd_dephasing_free, Assignment::Control);
  };
  control_pi("control pi 1");
  channel(Stage::Cz, "control lifetime (first half)", ChannelKind::StateDependentLoss,
          half_lifetime, Assignment::Control);
  channel(Stage::Cz, "Doppler dephasing", ChannelKind::Dephasing, s.doppler,
          Assignment::Control);

  for (int pulse = 1; pulse <= 2; ++pulse) {
    channel(Stage::Cz, "target blockaded dephasing " + std::to_string(pulse),
            ChannelKind::ControlledDephasing, s.ryd_dephasing_blockaded, Assignment::Joint);
    channel(Stage::Cz, "target blockaded 459 scattering " + std::to_string(pulse),
            ChannelKind::ControlledLoss, s.scattering_per_beam, Assignment::Joint);
  }
  for (int pulse = 1; pulse <= 2; ++pulse) {
    channel(Stage::Cz, "target free dephasing " + std::to_string(pulse),
            ChannelKind::AntiControlledDephasing, s.ryd_dephasing_free, Assignment::Joint);
    channel(Stage::Cz, "target scattering beam 1, pulse " + std::to_string(pulse), target_loss,
            s.scattering_per_beam, Assignment::Joint);
    channel(Stage::Cz, "target scattering beam 2, pulse " + std::to_string(pulse), target_loss,
            s.scattering_per_beam, Assignment::Joint);
    channel(Stage::Cz, "target position " + std::to_string(pulse), target_loss, s.position,
            Assignment::Joint);
    channel(Stage::Cz, "target laser noise " + std::to_string(pulse), target_loss, s.laser_noise,
            Assignment::Joint);
  }
  channel(Stage::Cz, "target lifetime", target_loss, s.lifetime_target, Assignment::Joint);
  channel(Stage::Cz, "blockade leakage", ChannelKind::AntiControlledDephasing,
          s.blockade_leakage, Assignment::Joint);
  channel(Stage::Cz, "Rydberg crosstalk", crosstalk_kind, s.crosstalk, Assignment::Joint);

  Matrix4c cz = Matrix4c::Identity();
  cz(1, 1) = -1.0;
  cz(2, 2) = -1.0;
  cz(3, 3) = -1.0;
  seq.steps.push_back(UnitaryStep2Q{Stage::Cz, "ideal C_Z phase", cz});

  channel(Stage::Cz, "control lifetime (second half)", ChannelKind::StateDependentLoss,
          half_lifetime, Assignment::Control);
  control_pi("control pi 2");

  // --- local rotation of the target: R = M(pi/2) Uz(pi/2) M(-pi/2), the two
  // microwave pulses are global and cancel on the control ---
  channel(Stage::LocalRotation, "local rotation pulse 1", ChannelKind::MicrowaveHalfPi, e_uw,
          Assignment::Both, -0.5 * pi);
  Matrix2c stark = Matrix2c::Identity();
  stark(1, 1) = Complex(0, 1);  // Uz(pi/2)
  seq.steps.push_back(UnitaryStep1Q{Stage::LocalRotation, "ideal Stark Rz(pi/2)", stark,
                                    Qubit::Target});
  channel(Stage::LocalRotation, "Stark pulse dephasing", ChannelKind::Dephasing, e_stark,
          Assignment::Target);
  channel(Stage::LocalRotation, "local rotation pulse 2", ChannelKind::MicrowaveHalfPi, e_uw,
          Assignment::Both, 0.5 * pi);

  // --- measurement stage: the parity pulse's dephasing error stays in
  // rho_out while its coherent part is undone; parity_scan reapplies the
  // ideal rotation at each phi ---
  channel(Stage::Measurement, "parity pi/2", ChannelKind::MicrowaveHalfPi, e_uw,
          Assignment::Both, 0.0);
  const Matrix2c undo = microwave_rotation(0.0).adjoint();
  seq.steps.push_back(
      UnitaryStep1Q{Stage::Measurement, "parity ideal part undone (control)", undo,
                    Qubit::Control});
  seq.steps.push_back(
      UnitaryStep1Q{Stage::Measurement, "parity ideal part undone (target)", undo,
                    Qubit::Target});
  channel(Stage::Measurement, "readout-2 loss", ChannelKind::Attenuation, e_readout,
          Assignment::Both);
  return seq;
}

namespace {

std::array<double, 4> confuse(std::array<double, 4> p, double eps) {
  if (eps == 0.0) return p;
  // independent symmetric confusion on each atom's readout bit
  std::array<double, 4> q{};
  for (int c = 0; c < 2; ++c)
    for (int t = 0; t < 2; ++t)
      for (int c2 = 0; c2 < 2; ++c2)
        for (int t2 = 0; t2 < 2; ++t2) {
          const double w = (c == c2 ? 1.0 - eps : eps) * (t == t2 ? 1.0 - eps : eps);
          q[static_cast<size_t>(2 * c + t)] += w * p[static_cast<size_t>(2 * c2 + t2)];
        }
  return q;
}

}  // namespace

std::array<double, 4> outcome_probabilities(const TwoQubitState& state, LossMap loss_map,
                                            double confusion) {
  std::array<double, 4> p{};
  for (int i = 0; i < 4; ++i) p[static_cast<size_t>(i)] = state.rho(i, i).real();
  const double deficit = 1.0 - (p[0] + p[1] + p[2] + p[3]);
  if (loss_map == LossMap::DarkAsOne)
    p[3] += deficit;  // an unattributed lost atom reads |1> on both bits
  else
    p[0] += deficit;
  return confuse(p, confusion);
}

std::array<double, 4> outcome_probabilities(const LossyState& state, LossMap loss_map,
                                            double confusion) {
  std::array<double, 4> p{};
  for (int i = 0; i < 4; ++i) p[static_cast<size_t>(i)] = state.both(i, i).real();
  const double ct0 = state.control_lost(0, 0).real();
  const double ct1 = state.control_lost(1, 1).real();
  const double tc0 = state.target_lost(0, 0).real();
  const double tc1 = state.target_lost(1, 1).real();
  if (loss_map == LossMap::DarkAsOne) {
    p[2] += ct0;  // control dark -> 1, target bit kept
    p[3] += ct1;
    p[1] += tc0;  // target dark -> 1, control bit kept
    p[3] += tc1;
    p[3] += state.both_lost;
  } else {
    p[0] += ct0;
    p[1] += ct1;
    p[0] += tc0;
    p[2] += tc1;
    p[0] += state.both_lost;
  }
  return confuse(p, confusion);
}

ParityCurve parity_scan(const LossyState& state, std::span<const double> phi_grid,
                        LossMap loss_map, double confusion) {
  ParityCurve curve;
  for (const double phi : phi_grid) {
    LossyState rotated = state;
    const Matrix2c rot = microwave_rotation(phi);
    apply_unitary_1q(rotated, rot, Qubit::Control);
    apply_unitary_1q(rotated, rot, Qubit::Target);
    const auto p = outcome_probabilities(rotated, loss_map, confusion);
    curve.phi.push_back(phi);
    curve.value.push_back(p[0] + p[3] - p[1] - p[2]);
  }
  return curve;
}

BellResult run_bell(const ChannelSequence& seq, const BellOptions& options) {
  LossyState st = LossyState::initial_11();
  run_sequence(st, seq);

  BellResult result;
  result.lossy = st;
  result.rho_out = TwoQubitState{st.both};

  TwoQubitState for_fidelity = result.rho_out;
  if (options.renormalize_fidelity) {
    const double tr = for_fidelity.trace();
    if (tr > 0) for_fidelity.rho /= tr;
  }
  result.f_direct = uhlmann_fidelity(for_fidelity, ideal_bell_state());

  result.populations = outcome_probabilities(st, options.loss_map, seq.eps_measurement);

  std::vector<double> grid(static_cast<size_t>(options.parity_points));
  for (int i = 0; i < options.parity_points; ++i)
    grid[static_cast<size_t>(i)] = 2.0 * pi * i / options.parity_points;
  result.parity = parity_scan(st, grid, options.loss_map, seq.eps_measurement);
  result.coherence = 0.5 * fit_parity(result.parity.phi, result.parity.value).amplitude;
  result.f_experimental =
      0.5 * (result.populations[0] + result.populations[3]) + result.coherence;
  return result;
}

namespace {

// one atom with a dark-loss ledger, for Ramsey and eye-diagram curves
struct SingleAtom {
  Matrix2c rho = Matrix2c::Zero();
  double lost = 0.0;

  static SingleAtom in_one() {
    SingleAtom a;
    a.rho(1, 1) = 1.0;
    return a;
  }
  void channel(ChannelKind kind, double eps, double angle = 0.0) {
    if (kind == ChannelKind::Attenuation)
      lost += eps * rho.trace().real();
    else if (kind == ChannelKind::StateDependentLoss)
      lost += eps * rho(1, 1).real();
    rho = apply_1q_single(rho, make_process_1q({kind, eps, angle, Assignment::Control}));
  }
  void unitary(const Matrix2c& u) { rho = u * rho * u.adjoint(); }
  double p_one(LossMap loss_map, double confusion) const {
    const double p1 = rho(1, 1).real() + (loss_map == LossMap::DarkAsOne ? lost : 0.0);
    const double p0 = rho(0, 0).real() + (loss_map == LossMap::DarkAsOne ? 0.0 : lost);
    return (1.0 - confusion) * p1 + confusion * p0;
  }
};

}  // namespace

double simulate_ramsey(double eps_uwave, double eps_extra_dephasing,
                       std::span<const double> theta_grid, const RamseyContext& ctx) {
  std::vector<double> p1;
  p1.reserve(theta_grid.size());
  for (const double theta : theta_grid) {
    SingleAtom atom = SingleAtom::in_one();
    atom.channel(ChannelKind::Attenuation, ctx.readout);
    atom.channel(ChannelKind::Attenuation, ctx.pumping);
    atom.channel(ChannelKind::MicrowaveHalfPi, eps_uwave, 0.0);
    atom.channel(ChannelKind::Dephasing, eps_extra_dephasing);
    atom.channel(ChannelKind::MicrowaveHalfPi, eps_uwave, theta);
    p1.push_back(atom.p_one(ctx.loss_map, ctx.measurement));
  }
  return fit_sinusoid(theta_grid, p1, 1).amplitude;
}

double extract_epsilon(double measured_amplitude, const std::function<double(double)>& model,
                       double amp_tol) {
  const double at_zero = model(0.0);
  const double at_half = model(0.5);
  if (measured_amplitude > at_zero + amp_tol)
    throw UsageError("extract_epsilon: amplitude above the model's ideal maximum");
  if (measured_amplitude < at_half - amp_tol)
    throw UsageError("extract_epsilon: amplitude below the model's reachable range");
  double lo = 0.0, hi = 0.5;  // model amplitude decreases with epsilon
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double a = model(mid);
    if (std::abs(a - measured_amplitude) < amp_tol) return mid;
    (a > measured_amplitude ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

EyeCurve simulate_eye_diagram(const ChannelStrengths& eps, bool control_loaded,
                              std::span<const double> theta_grid, bool include_spam) {
  EyeCurve curve;
  const double readout = include_spam ? eps.readout : 0.0;
  const double pumping = include_spam ? eps.pumping : 0.0;
  const double confusion = include_spam ? eps.measurement : 0.0;
  Matrix2c flip = Matrix2c::Identity();
  flip(1, 1) = -1.0;  // the 2pi pulse phase on the non-blockaded target
  for (const double theta : theta_grid) {
    SingleAtom atom = SingleAtom::in_one();
    atom.channel(ChannelKind::Attenuation, readout);
    atom.channel(ChannelKind::Attenuation, pumping);
    atom.channel(ChannelKind::MicrowaveHalfPi, eps.uwave, 0.0);
    if (control_loaded) {
      for (int pulse = 0; pulse < 2; ++pulse) {
        atom.channel(ChannelKind::Dephasing, eps.ryd_dephasing_blockaded);
        atom.channel(ChannelKind::StateDependentLoss, eps.scattering_per_beam);
      }
    } else {
      atom.unitary(flip);
      for (int pulse = 0; pulse < 2; ++pulse) {
        atom.channel(ChannelKind::Dephasing, eps.ryd_dephasing_free);
        atom.channel(ChannelKind::StateDependentLoss, eps.scattering_per_beam);
        atom.channel(ChannelKind::StateDependentLoss, eps.scattering_per_beam);
        atom.channel(ChannelKind::StateDependentLoss, eps.position);
        atom.channel(ChannelKind::StateDependentLoss, eps.laser_noise);
      }
      atom.channel(ChannelKind::StateDependentLoss, eps.lifetime_target);
      atom.channel(ChannelKind::Dephasing, eps.blockade_leakage);
      atom.channel(ChannelKind::Dephasing, eps.crosstalk);
    }
    atom.channel(ChannelKind::MicrowaveHalfPi, eps.uwave, theta);
    atom.channel(ChannelKind::Attenuation, readout);
    curve.theta.push_back(theta);
    curve.p1.push_back(atom.p_one(LossMap::DarkAsOne, confusion));
  }
  const SinusoidFit fit = fit_sinusoid(curve.theta, curve.p1, 1);
  curve.amplitude = 2.0 * fit.amplitude;
  curve.phase = fit.phase;
  curve.offset = fit.offset;
  return curve;
}

}  // namespace rydsim
