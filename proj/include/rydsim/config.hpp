#pragma once

#include <map>
#include <optional>
#include <string>

#include "rydsim/beam.hpp"
#include "rydsim/budget.hpp"
#include "rydsim/coherence.hpp"
#include "rydsim/pipeline.hpp"

namespace rydsim {

/// Dimension class a config key must carry; the unit suffix is checked
/// against it and converted to SI (angular frequencies to rad/s) on read.
enum class UnitClass { Time, Length, Temperature, AngularFrequency, MagneticField, Dimensionless, Text };

struct KeySchema {
  UnitClass unit = UnitClass::Dimensionless;
  bool required = true;
  const char* display_suffix = "";  // suffix used by sweep ranges and reports
};

/// Flat sectioned key = value config with unit suffixes
/// (s, us, ns, m, um, nm, K, uK, MHz, T, uT, dimensionless).
/// Unknown keys are rejected; every required key must be present.
class ExperimentConfig {
 public:
  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_string(const std::string& text, const std::string& origin = "<string>");

  /// SI value of "section.key"; ConfigError if missing or textual.
  double get(const std::string& path) const;
  std::string get_text(const std::string& path) const;
  bool has(const std::string& path) const;

  /// Replaces the value of an existing numeric key, `value` given in the
  /// key's display unit. Used by parameter sweeps.
  void override_value(const std::string& path, double value);

  static const std::map<std::string, KeySchema>& schema();
  static double convert_display(const std::string& path, double value_in_display_units);

  PhysicalParams physical_params() const;
  BeamGeometry beam_geometry() const;
  TrapDistribution trap_distribution() const;
  ThermalDriveParams thermal_drive_params() const;
  BellOptions bell_options() const;
  double ramsey_anchor_t2() const;
  double ramsey_anchor_temperature() const;
  std::uint64_t mc_seed() const;
  std::uint64_t mc_samples() const;

 private:
  struct Entry {
    double si_value = 0.0;
    bool textual = false;
    std::string text;
  };
  std::map<std::string, Entry> values_;
};

}  // namespace rydsim
