#pragma once

#include "rydsim/process.hpp"

namespace rydsim {

enum class ChannelKind {
  Identity,
  Attenuation,
  Dephasing,
  StateDependentLoss,
  MicrowaveHalfPi,
  ControlledDephasing,
  AntiControlledDephasing,
  ControlledLoss,
  AntiControlledLoss,
};

enum class Assignment { Control, Target, Both, Joint };

struct ChannelSpec {
  ChannelKind kind = ChannelKind::Identity;
  double epsilon = 0.0;
  double axis_angle = 0.0;  // microwave frame angle, radians
  Assignment assignment = Assignment::Control;
};

bool is_two_qubit(ChannelKind kind);

// Single-qubit channels. epsilon outside [0,1] raises UsageError.
Process1Q chi_identity();
Process1Q chi_attenuation(double eps);
Process1Q chi_dephasing(double eps);
Process1Q chi_state_dependent_loss(double eps);

/// pi/2 rotation with probability 1-eps and the opposite rotation with
/// probability eps (dephasing about the rotation axis). Rotated-axis pulses
/// are produced with conjugate_z_frame, never by re-deriving entries.
Process1Q chi_microwave_half_pi(double eps);

// Two-qubit channels: (1-eps) identity + eps K rho K with K the diagonal
// operator written next to each constructor.
Process2Q chi_controlled_dephasing(double eps);       // K = diag(1, 1, 1,-1)
Process2Q chi_anticontrolled_dephasing(double eps);   // K = diag(1,-1, 1, 1)
Process2Q chi_controlled_loss(double eps);            // K = diag(1, 1, 1, 0)
Process2Q chi_anticontrolled_loss(double eps);        // K = diag(1, 0, 1, 1)

Process1Q make_process_1q(const ChannelSpec& spec);
Process2Q make_process_2q(const ChannelSpec& spec);

}  // namespace rydsim
