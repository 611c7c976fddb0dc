#include "rydsim/process.hpp"

#include <array>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace rydsim {

namespace {

std::array<Matrix2c, 4> make_paulis() {
  std::array<Matrix2c, 4> p;
  const Complex i(0, 1);
  p[0] << 1, 0, 0, 1;
  p[1] << 0, 1, 1, 0;
  p[2] << 0, -i, i, 0;
  p[3] << 1, 0, 0, -1;
  return p;
}

Matrix4c kron2(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Matrix4c hermitize(const Matrix4c& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

const Matrix2c& pauli(int m) {
  static const auto paulis = make_paulis();
  return paulis.at(static_cast<size_t>(m));
}

const Matrix4c& pauli_on(Qubit which, int m) {
  static const auto table = [] {
    std::array<std::array<Matrix4c, 4>, 2> t;
    for (int m = 0; m < 4; ++m) {
      t[0][static_cast<size_t>(m)] = kron2(pauli(m), pauli(0));
      t[1][static_cast<size_t>(m)] = kron2(pauli(0), pauli(m));
    }
    return t;
  }();
  return table[which == Qubit::Control ? 0 : 1][static_cast<size_t>(m)];
}

const Matrix4c& pauli_pair(int m, int r) {
  static const auto table = [] {
    std::array<std::array<Matrix4c, 4>, 4> t;
    for (int m = 0; m < 4; ++m)
      for (int r = 0; r < 4; ++r)
        t[static_cast<size_t>(m)][static_cast<size_t>(r)] = kron2(pauli(m), pauli(r));
    return t;
  }();
  return table[static_cast<size_t>(m)][static_cast<size_t>(r)];
}

TwoQubitState TwoQubitState::basis(int control, int target) {
  if (control < 0 || control > 1 || target < 0 || target > 1)
    throw UsageError("basis index must be 0 or 1");
  TwoQubitState s;
  s.rho(2 * control + target, 2 * control + target) = 1.0;
  return s;
}

Matrix16c Process2Q::reshape() const {
  Matrix16c out;
  for (int m = 0; m < 4; ++m)
    for (int r = 0; r < 4; ++r)
      for (int n = 0; n < 4; ++n)
        for (int s = 0; s < 4; ++s)
          out(4 * m + r, 4 * n + s) = (*this)(m, r, n, s);
  return out;
}

bool is_hermitian(const Matrix4c& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

void validate_state(const TwoQubitState& state) {
  if (!is_hermitian(state.rho))
    throw ValidationError("state is not Hermitian within 1e-12");
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(state.rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw ValidationError("state has an eigenvalue below -1e-10");
  const double tr = state.trace();
  if (tr < -1e-12 || tr > 1.0 + 1e-12)
    throw ValidationError("state trace outside [0, 1]");
}

TwoQubitState apply_1q(const TwoQubitState& state, const Process1Q& p, Qubit which) {
  if (!is_hermitian(state.rho))
    throw ValidationError("apply_1q: input state is not Hermitian");
  Matrix4c out = Matrix4c::Zero();
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      const Complex c = p.chi(m, n);
      if (c == Complex(0, 0)) continue;
      out.noalias() += c * pauli_on(which, m) * state.rho * pauli_on(which, n);
    }
  return {hermitize(out)};
}

TwoQubitState apply_2q(const TwoQubitState& state, const Process2Q& p) {
  if (!is_hermitian(state.rho))
    throw ValidationError("apply_2q: input state is not Hermitian");
  Matrix4c out = Matrix4c::Zero();
  for (int m = 0; m < 4; ++m)
    for (int r = 0; r < 4; ++r) {
      Matrix4c left = pauli_pair(m, r) * state.rho;
      for (int n = 0; n < 4; ++n)
        for (int s = 0; s < 4; ++s) {
          const Complex c = p(m, r, n, s);
          if (c == Complex(0, 0)) continue;
          out.noalias() += c * left * pauli_pair(n, s);
        }
    }
  return {hermitize(out)};
}

Matrix2c apply_1q_single(const Matrix2c& rho, const Process1Q& p) {
  Matrix2c out = Matrix2c::Zero();
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      const Complex c = p.chi(m, n);
      if (c == Complex(0, 0)) continue;
      out.noalias() += c * pauli(m) * rho * pauli(n);
    }
  return 0.5 * (out + out.adjoint());
}

Process1Q conjugate_z_frame(const Process1Q& p, double theta) {
  if (!std::isfinite(theta)) throw UsageError("frame angle must be finite");
  // Uz(-t) sigma Uz(t) mixes the x and y rows; I and z are fixed.
  Matrix4c c = Matrix4c::Identity();
  c(1, 1) = std::cos(theta);
  c(1, 2) = std::sin(theta);
  c(2, 1) = -std::sin(theta);
  c(2, 2) = std::cos(theta);
  return {c * p.chi * c.transpose()};
}

Process1Q process_from_unitary(const Matrix2c& u) {
  Vector4c v;
  for (int m = 0; m < 4; ++m) v(m) = (pauli(m).adjoint() * u).trace() / 2.0;
  return {v * v.adjoint()};
}

Process2Q process_from_unitary(const Matrix4c& u) {
  Matrix4c c;  // coefficients over the left Pauli pair (m, r)
  for (int m = 0; m < 4; ++m)
    for (int r = 0; r < 4; ++r)
      c(m, r) = (pauli_pair(m, r).adjoint() * u).trace() / 4.0;
  Process2Q p;
  for (int m = 0; m < 4; ++m)
    for (int r = 0; r < 4; ++r)
      for (int n = 0; n < 4; ++n)
        for (int s = 0; s < 4; ++s)
          p(m, r, n, s) = c(m, r) * std::conj(c(n, s));
  return p;
}

namespace {

// <0|sigma_m|0> = 1 for I and z, 0 for x and y.
constexpr double kGroundWeight[4] = {1.0, 0.0, 0.0, 1.0};

Process1Q restrict_impl(const Process2Q& p, bool control_lost) {
  Process1Q out;
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s) {
      Complex acc(0, 0);
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) {
          const Complex c = control_lost ? p(m, r, n, s) : p(r, m, s, n);
          acc += c * kGroundWeight[m] * kGroundWeight[n];
        }
      out.chi(r, s) = acc;
    }
  return out;
}

}  // namespace

Process1Q restrict_lost_control(const Process2Q& p) { return restrict_impl(p, true); }
Process1Q restrict_lost_target(const Process2Q& p) { return restrict_impl(p, false); }

Matrix4c hermitian_sqrt(const Matrix4c& m) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(m);
  Eigen::Vector4d ev = es.eigenvalues();
  for (int i = 0; i < 4; ++i) {
    if (ev(i) < -1e-10)
      throw ValidationError("hermitian_sqrt: eigenvalue below -1e-10");
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double uhlmann_fidelity(const TwoQubitState& rho_out, const TwoQubitState& rho_ref) {
  if (!is_hermitian(rho_out.rho) || !is_hermitian(rho_ref.rho))
    throw ValidationError("uhlmann_fidelity: inputs must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix4c> check_out(rho_out.rho, Eigen::EigenvaluesOnly);
  if (check_out.eigenvalues().minCoeff() < -1e-10)
    throw ValidationError("uhlmann_fidelity: rho_out eigenvalue below -1e-10");
  const Matrix4c sref = hermitian_sqrt(rho_ref.rho);
  const Matrix4c inner = hermitize(sref * rho_out.rho * sref);
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(inner, Eigen::EigenvaluesOnly);
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double ev = es.eigenvalues()(i);
    if (ev < -1e-10)
      throw ValidationError("uhlmann_fidelity: product eigenvalue below -1e-10");
    sum += std::sqrt(std::max(ev, 0.0));
  }
  return sum * sum;
}

TwoQubitState compose(std::span<const ProcessStep> steps, const TwoQubitState& initial) {
  TwoQubitState state = initial;
  for (const auto& step : steps) {
    if (const auto* one = std::get_if<OneQubitStep>(&step))
      state = apply_1q(state, one->process, one->which);
    else
      state = apply_2q(state, std::get<TwoQubitStep>(step).process);
  }
  return state;
}

}  // namespace rydsim
