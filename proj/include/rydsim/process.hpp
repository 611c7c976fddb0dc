#pragma once

#include <array>
#include <span>
#include <variant>
#include <vector>

#include "rydsim/types.hpp"

namespace rydsim {

/// Two-qubit density matrix in the basis |00>,|01>,|10>,|11| with the first
/// index the control atom. Loss channels are trace-decreasing, so trace(rho)
/// may be below one.
struct TwoQubitState {
  Matrix4c rho = Matrix4c::Zero();

  static TwoQubitState basis(int control, int target);
  double trace() const { return rho.trace().real(); }
};

enum class Qubit { Control, Target };

/// Single-qubit process matrix chi_{m,n} over the Pauli order {I, x, y, z}.
struct Process1Q {
  Matrix4c chi = Matrix4c::Zero();
};

/// Two-qubit process tensor chi_{m,r,n,s}; (m,r) index the left Pauli pair
/// (control, target) and (n,s) the right pair. The 16x16 reshape with
/// row = 4m+r, col = 4n+s is used for positivity checks only.
struct Process2Q {
  std::array<Complex, 256> chi{};

  Complex& operator()(int m, int r, int n, int s) {
    return chi[static_cast<size_t>(((m * 4 + r) * 4 + n) * 4 + s)];
  }
  Complex operator()(int m, int r, int n, int s) const {
    return chi[static_cast<size_t>(((m * 4 + r) * 4 + n) * 4 + s)];
  }
  Matrix16c reshape() const;
};

const Matrix2c& pauli(int m);                    // m in 0..3 = I,x,y,z
const Matrix4c& pauli_on(Qubit which, int m);    // sigma_m (x) I or I (x) sigma_m
const Matrix4c& pauli_pair(int m, int r);        // sigma_m (x) sigma_r

bool is_hermitian(const Matrix4c& m, double tol = 1e-12);

/// Throws ValidationError if rho is not Hermitian/PSD/trace-bounded.
void validate_state(const TwoQubitState& state);

TwoQubitState apply_1q(const TwoQubitState& state, const Process1Q& p, Qubit which);
TwoQubitState apply_2q(const TwoQubitState& state, const Process2Q& p);

/// Same Pauli sandwich sum on a bare single-qubit density matrix.
Matrix2c apply_1q_single(const Matrix2c& rho, const Process1Q& p);

/// Effective process for a rotated equatorial frame: the returned chi acts as
/// rho -> Uz(-theta) E(Uz(theta) rho Uz(-theta)) Uz(theta) with
/// Uz(theta) = diag(1, e^{i theta}).
Process1Q conjugate_z_frame(const Process1Q& p, double theta);

/// chi of a coherent unitary (rank one in the Pauli coefficient basis).
Process1Q process_from_unitary(const Matrix2c& u);
Process2Q process_from_unitary(const Matrix4c& u);

/// Single-atom reduction of a two-qubit process when the partner atom is
/// absent: the partner's Pauli indices are contracted against <0|sigma|0>.
/// For the channel library this reproduces the physical reductions (an
/// anti-controlled loss becomes a plain state-dependent loss, a controlled
/// channel becomes the identity, the C_Z phase becomes Uz(pi)).
Process1Q restrict_lost_control(const Process2Q& p);  // map for the target
Process1Q restrict_lost_target(const Process2Q& p);   // map for the control

/// Uhlmann fidelity (Tr sqrt(sqrt(ref) rho sqrt(ref)))^2. rho_out is consumed
/// as-is: a trace deficit lowers the result. For a pure reference this equals
/// <psi|rho_out|psi>.
double uhlmann_fidelity(const TwoQubitState& rho_out, const TwoQubitState& rho_ref);

/// Hermitian square root with eigenvalue clamping; eigenvalues below -1e-10
/// raise ValidationError.
Matrix4c hermitian_sqrt(const Matrix4c& m);

struct OneQubitStep {
  Process1Q process;
  Qubit which = Qubit::Control;
};
struct TwoQubitStep {
  Process2Q process;
};
using ProcessStep = std::variant<OneQubitStep, TwoQubitStep>;

/// Ordered left fold of the steps over the initial state.
TwoQubitState compose(std::span<const ProcessStep> steps, const TwoQubitState& initial);

}  // namespace rydsim
