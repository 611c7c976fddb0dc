#include "rydsim/channels.hpp"

#include <cmath>

namespace rydsim {

namespace {

void check_eps(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw UsageError("channel strength must lie in [0, 1]");
}

// chi = (1-eps) |II><II| + eps |k><k| with k the Pauli-pair coefficient
// vector of a diagonal operator.
Process2Q diagonal_mixture(double eps, const Matrix4c& k_diag) {
  check_eps(eps);
  Matrix4c c = Matrix4c::Zero();  // coefficients over the left pair (m, r)
  for (int m = 0; m < 4; ++m)
    for (int r = 0; r < 4; ++r)
      c(m, r) = (pauli_pair(m, r).adjoint() * k_diag).trace() / 4.0;
  Process2Q p;
  p(0, 0, 0, 0) = 1.0 - eps;
  for (int m = 0; m < 4; ++m)
    for (int r = 0; r < 4; ++r)
      for (int n = 0; n < 4; ++n)
        for (int s = 0; s < 4; ++s)
          p(m, r, n, s) += eps * c(m, r) * std::conj(c(n, s));
  return p;
}

Matrix4c diag4(double a, double b, double c, double d) {
  Matrix4c m = Matrix4c::Zero();
  m(0, 0) = a; m(1, 1) = b; m(2, 2) = c; m(3, 3) = d;
  return m;
}

}  // namespace

bool is_two_qubit(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::ControlledDephasing:
    case ChannelKind::AntiControlledDephasing:
    case ChannelKind::ControlledLoss:
    case ChannelKind::AntiControlledLoss:
      return true;
    default:
      return false;
  }
}

Process1Q chi_identity() {
  Process1Q p;
  p.chi(0, 0) = 1.0;
  return p;
}

Process1Q chi_attenuation(double eps) {
  check_eps(eps);
  Process1Q p;
  p.chi(0, 0) = 1.0 - eps;
  return p;
}

Process1Q chi_dephasing(double eps) {
  check_eps(eps);
  Process1Q p;
  p.chi(0, 0) = 1.0 - eps;
  p.chi(3, 3) = eps;
  return p;
}

Process1Q chi_state_dependent_loss(double eps) {
  check_eps(eps);
  Process1Q p;
  p.chi(0, 0) = 1.0 - 0.75 * eps;
  p.chi(0, 3) = 0.25 * eps;
  p.chi(3, 0) = 0.25 * eps;
  p.chi(3, 3) = 0.25 * eps;
  return p;
}

Process1Q chi_microwave_half_pi(double eps) {
  check_eps(eps);
  const Complex i(0, 1);
  Process1Q p;
  p.chi(0, 0) = 0.5;
  p.chi(2, 2) = 0.5;
  p.chi(0, 2) = i * (0.5 - eps);
  p.chi(2, 0) = -i * (0.5 - eps);
  return p;
}

Process2Q chi_controlled_dephasing(double eps) {
  return diagonal_mixture(eps, diag4(1, 1, 1, -1));
}

Process2Q chi_anticontrolled_dephasing(double eps) {
  return diagonal_mixture(eps, diag4(1, -1, 1, 1));
}

Process2Q chi_controlled_loss(double eps) {
  return diagonal_mixture(eps, diag4(1, 1, 1, 0));
}

Process2Q chi_anticontrolled_loss(double eps) {
  return diagonal_mixture(eps, diag4(1, 0, 1, 1));
}

Process1Q make_process_1q(const ChannelSpec& spec) {
  switch (spec.kind) {
    case ChannelKind::Identity:
      return chi_identity();
    case ChannelKind::Attenuation:
      return chi_attenuation(spec.epsilon);
    case ChannelKind::Dephasing:
      return chi_dephasing(spec.epsilon);
    case ChannelKind::StateDependentLoss:
      return chi_state_dependent_loss(spec.epsilon);
    case ChannelKind::MicrowaveHalfPi:
      return conjugate_z_frame(chi_microwave_half_pi(spec.epsilon), spec.axis_angle);
    default:
      throw UsageError("make_process_1q: two-qubit channel kind");
  }
}

Process2Q make_process_2q(const ChannelSpec& spec) {
  switch (spec.kind) {
    case ChannelKind::ControlledDephasing:
      return chi_controlled_dephasing(spec.epsilon);
    case ChannelKind::AntiControlledDephasing:
      return chi_anticontrolled_dephasing(spec.epsilon);
    case ChannelKind::ControlledLoss:
      return chi_controlled_loss(spec.epsilon);
    case ChannelKind::AntiControlledLoss:
      return chi_anticontrolled_loss(spec.epsilon);
    default:
      throw UsageError("make_process_2q: single-qubit channel kind");
  }
}

}  // namespace rydsim
