#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rydsim/budget.hpp"
#include "rydsim/channels.hpp"
#include "rydsim/process.hpp"

namespace rydsim {

enum class Stage { StatePrep, Cz, LocalRotation, Measurement };
enum class Mode { Full, NoSpam, CzOnly };
enum class LossMap { DarkAsOne, DarkAsZero };

Mode mode_from_string(const std::string& s);  // UsageError on unknown mode

struct ChannelStep {
  Stage stage;
  std::string label;
  ChannelSpec spec;
};
struct UnitaryStep1Q {
  Stage stage;
  std::string label;
  Matrix2c u;
  Qubit which;
};
struct UnitaryStep2Q {
  Stage stage;
  std::string label;
  Matrix4c u;
};
using SequenceStep = std::variant<ChannelStep, UnitaryStep1Q, UnitaryStep2Q>;

struct ChannelSequence {
  std::vector<SequenceStep> steps;
  double eps_measurement = 0.0;  // per-atom readout confusion (outcome mapping)
};

/// Density matrix split by atom-loss sector. `both` is the ordinary two-qubit
/// state; a loss event moves its weight into the sector where the lost atom
/// reads dark while the partner keeps evolving. Two-qubit steps act on lost
/// sectors through their single-atom restriction (absent partner contracted
/// as |0>), so a target whose control was lost still acquires the
/// non-blockaded pi phase.
struct LossyState {
  Matrix4c both = Matrix4c::Zero();
  Matrix2c control_lost = Matrix2c::Zero();  // target density, control gone
  Matrix2c target_lost = Matrix2c::Zero();   // control density, target gone
  double both_lost = 0.0;

  double total_trace() const;
  static LossyState initial_11();
};

void apply_step(LossyState& state, const SequenceStep& step);
void run_sequence(LossyState& state, const ChannelSequence& seq);

/// Sequence steps flattened to bare processes (loss bookkeeping dropped), for
/// the plain compose path.
std::vector<ProcessStep> to_process_steps(const ChannelSequence& seq);

/// Alternative channel-interpretation switches for sensitivity analysis. The
/// defaults condition the target's 2pi-pulse loss channels on the control
/// being in |0> (only then is the target Rydberg-excited) and treat crosstalk
/// as an erroneous-blockade phase error.
struct SequenceVariants {
  bool target_loss_controlled = false;  // condition target losses on control |1> instead
  bool crosstalk_as_loss = false;       // model crosstalk as loss instead of dephasing
};

/// The Bell-state preparation sequence: state preparation, C_Z stage, local pi/2 on the
/// target, and measurement-stage error channels. `mode` selects which error
/// groups are active; ideal rotations always remain.
ChannelSequence build_sequence(const ErrorBudget& budget, Mode mode,
                               const SequenceVariants& variants = {});

/// The state the noiseless sequence produces, (|00> - |11>)/sqrt(2).
TwoQubitState ideal_bell_state();

/// Ideal microwave pi/2 rotation at equatorial frame angle theta.
Matrix2c microwave_rotation(double theta);

std::array<double, 4> outcome_probabilities(const TwoQubitState& state, LossMap loss_map,
                                            double confusion);
std::array<double, 4> outcome_probabilities(const LossyState& state, LossMap loss_map,
                                            double confusion);

struct ParityCurve {
  std::vector<double> phi;
  std::vector<double> value;  // P00 + P11 - P01 - P10
};
ParityCurve parity_scan(const LossyState& state, std::span<const double> phi_grid,
                        LossMap loss_map, double confusion);

struct BellOptions {
  LossMap loss_map = LossMap::DarkAsOne;
  bool renormalize_fidelity = false;  // divide rho_out by its trace first
  int parity_points = 64;
};

struct BellResult {
  TwoQubitState rho_out;     // both-present sector, all error channels applied
  LossyState lossy;          // full sector bookkeeping at the same point
  double f_direct = 0.0;
  std::array<double, 4> populations{};  // P00, P01, P10, P11
  ParityCurve parity;
  double coherence = 0.0;          // fitted parity amplitude / 2
  double f_experimental = 0.0;     // (P00 + P11)/2 + C
};

BellResult run_bell(const ChannelSequence& seq, const BellOptions& options = {});

/// Two-pulse Ramsey fringe amplitude on one atom: prep losses, pi/2 pulse,
/// optional extra dephasing, pi/2 at frame theta, readout. Returns the fitted
/// cosine amplitude of P(|1>) against theta.
struct RamseyContext {
  double readout = 0.0;
  double pumping = 0.0;
  double measurement = 0.0;
  LossMap loss_map = LossMap::DarkAsOne;
};
double simulate_ramsey(double eps_uwave, double eps_extra_dephasing,
                       std::span<const double> theta_grid, const RamseyContext& ctx = {});

/// Inverts a monotone amplitude(epsilon) model by bisection on [0, 1/2].
/// Throws UsageError when the amplitude is outside the reachable range.
double extract_epsilon(double measured_amplitude,
                       const std::function<double(double)>& model,
                       double amp_tol = 1e-6);

struct EyeCurve {
  std::vector<double> theta;
  std::vector<double> p1;
  double amplitude = 0.0;  // 2x fitted cosine amplitude (1.0 for ideal contrast)
  double phase = 0.0;
  double offset = 0.0;
};

/// Target-qubit Ramsey with the embedded 2pi Rydberg pulse channel set;
/// control_loaded selects the blockaded branch. include_spam adds readout,
/// pumping, and confusion errors.
EyeCurve simulate_eye_diagram(const ChannelStrengths& eps, bool control_loaded,
                              std::span<const double> theta_grid, bool include_spam = true);

}  // namespace rydsim
