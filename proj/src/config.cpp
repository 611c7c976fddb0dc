#include "rydsim/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rydsim {

namespace {

struct UnitDef {
  const char* suffix;
  UnitClass unit;
  double to_si;
};

// MHz values are Omega/2pi style and convert to rad/s at this boundary.
const UnitDef kUnits[] = {
    {"s", UnitClass::Time, 1.0},
    {"us", UnitClass::Time, 1e-6},
    {"ns", UnitClass::Time, 1e-9},
    {"m", UnitClass::Length, 1.0},
    {"um", UnitClass::Length, 1e-6},
    {"nm", UnitClass::Length, 1e-9},
    {"K", UnitClass::Temperature, 1.0},
    {"uK", UnitClass::Temperature, 1e-6},
    {"MHz", UnitClass::AngularFrequency, 2.0 * pi * 1e6},
    {"T", UnitClass::MagneticField, 1.0},
    {"uT", UnitClass::MagneticField, 1e-6},
    {"dimensionless", UnitClass::Dimensionless, 1.0},
};

const UnitDef* find_unit(const std::string& suffix) {
  for (const auto& u : kUnits)
    if (suffix == u.suffix) return &u;
  return nullptr;
}

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

const std::map<std::string, KeySchema>& ExperimentConfig::schema() {
  using U = UnitClass;
  static const std::map<std::string, KeySchema> s = {
      {"atom.temperature", {U::Temperature, true, "uK"}},
      {"atom.rydberg_lifetime", {U::Time, true, "us"}},
      {"atom.intermediate_lifetime", {U::Time, true, "ns"}},
      {"atom.one_photon_detuning", {U::AngularFrequency, true, "MHz"}},
      {"atom.g_factor_product", {U::Dimensionless, true, ""}},

      {"beams.lambda1", {U::Length, true, "nm"}},
      {"beams.lambda2", {U::Length, true, "nm"}},
      {"beams.w1", {U::Length, true, "um"}},
      {"beams.w2", {U::Length, true, "um"}},
      {"beams.rabi_frequency", {U::AngularFrequency, true, "MHz"}},
      {"beams.stark_shift_1", {U::AngularFrequency, true, "MHz"}},
      {"beams.stark_shift_2", {U::AngularFrequency, true, "MHz"}},
      {"beams.cz_rabi_frequency", {U::AngularFrequency, true, "MHz"}},
      {"beams.blockade_shift", {U::AngularFrequency, true, "MHz"}},
      {"beams.crosstalk_w1", {U::Length, true, "um"}},
      {"beams.crosstalk_w2", {U::Length, true, "um"}},
      {"beams.crosstalk_rabi", {U::AngularFrequency, true, "MHz"}},
      {"beams.crosstalk_stark", {U::AngularFrequency, true, "MHz"}},

      {"trap.sigma", {U::Length, true, "um"}},
      {"trap.sigma_z", {U::Length, true, "um"}},
      {"trap.array_period", {U::Length, true, "um"}},
      {"trap.magnetic_noise", {U::MagneticField, true, "uT"}},
      {"trap.escape_distance", {U::Length, true, "um"}},
      {"trap.trap_drop_time", {U::Time, true, "us"}},
      {"trap.fill_fraction", {U::Dimensionless, true, ""}},
      {"trap.omega_x", {U::AngularFrequency, true, "MHz"}},
      {"trap.omega_y", {U::AngularFrequency, true, "MHz"}},
      {"trap.omega_z", {U::AngularFrequency, true, "MHz"}},
      {"trap.light_shift_fraction", {U::Dimensionless, true, ""}},
      {"trap.drive_rabi", {U::AngularFrequency, true, "MHz"}},
      {"trap.ramsey_t2_anchor", {U::Time, true, "s"}},
      {"trap.ramsey_t_anchor", {U::Temperature, true, "uK"}},

      {"timings.t_pi", {U::Time, true, "ns"}},
      {"timings.t_2pi", {U::Time, true, "ns"}},
      {"timings.t_gap", {U::Time, true, "ns"}},
      {"timings.t_gr", {U::Time, true, "us"}},

      {"measured_errors.laser_noise", {U::Dimensionless, true, ""}},
      {"measured_errors.position", {U::Dimensionless, true, ""}},
      {"measured_errors.ryd_dephasing_free", {U::Dimensionless, true, ""}},
      {"measured_errors.ryd_dephasing_blockaded", {U::Dimensionless, true, ""}},
      {"measured_errors.crosstalk", {U::Dimensionless, true, ""}},
      {"measured_errors.uwave", {U::Dimensionless, true, ""}},
      {"measured_errors.stark", {U::Dimensionless, true, ""}},
      {"measured_errors.readout", {U::Dimensionless, true, ""}},
      {"measured_errors.pumping", {U::Dimensionless, true, ""}},
      {"measured_errors.measurement", {U::Dimensionless, true, ""}},

      {"pipeline_options.loss_map", {U::Text, false, ""}},
      {"pipeline_options.renormalize_fidelity", {U::Text, false, ""}},
      {"pipeline_options.mc_seed", {U::Dimensionless, false, ""}},
      {"pipeline_options.mc_samples", {U::Dimensionless, false, ""}},

      {"sweep.param", {U::Text, false, ""}},
      {"sweep.range", {U::Text, false, ""}},
      {"sweep.observable", {U::Text, false, ""}},
      {"sweep.mode", {U::Text, false, ""}},
  };
  return s;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_string(buffer.str(), path);
}

ExperimentConfig ExperimentConfig::from_string(const std::string& text,
                                               const std::string& origin) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) throw ConfigError(where + ": key outside any [section]");
    const std::string path = section + "." + key;
    const auto it = schema().find(path);
    if (it == schema().end()) throw ConfigError(where + ": unknown key " + path);

    Entry entry;
    if (it->second.unit == UnitClass::Text) {
      entry.textual = true;
      entry.text = value;
    } else {
      std::istringstream vs(value);
      std::string num_tok, unit_tok, extra;
      vs >> num_tok >> unit_tok >> extra;
      if (!extra.empty()) throw ConfigError(where + ": trailing tokens in " + path);
      char* end = nullptr;
      const double number = std::strtod(num_tok.c_str(), &end);
      if (num_tok.empty() || end != num_tok.c_str() + num_tok.size())
        throw ConfigError(where + ": not a number in " + path);
      if (unit_tok.empty()) {
        if (it->second.unit != UnitClass::Dimensionless)
          throw ConfigError(where + ": missing unit suffix for " + path);
        entry.si_value = number;
      } else {
        const UnitDef* unit = find_unit(unit_tok);
        if (unit == nullptr)
          throw ConfigError(where + ": malformed unit suffix '" + unit_tok + "' for " + path);
        if (unit->unit != it->second.unit)
          throw ConfigError(where + ": unit '" + unit_tok + "' does not match the dimension of " +
                            path);
        entry.si_value = number * unit->to_si;
      }
    }
    cfg.values_[path] = entry;
  }
  for (const auto& [path, key_schema] : schema())
    if (key_schema.required && cfg.values_.find(path) == cfg.values_.end())
      throw ConfigError(origin + ": missing required key " + path);
  return cfg;
}

double ExperimentConfig::get(const std::string& path) const {
  const auto it = values_.find(path);
  if (it == values_.end()) throw ConfigError("config key not present: " + path);
  if (it->second.textual) throw ConfigError("config key is textual: " + path);
  return it->second.si_value;
}

std::string ExperimentConfig::get_text(const std::string& path) const {
  const auto it = values_.find(path);
  if (it == values_.end()) throw ConfigError("config key not present: " + path);
  if (!it->second.textual) throw ConfigError("config key is numeric: " + path);
  return it->second.text;
}

bool ExperimentConfig::has(const std::string& path) const {
  return values_.find(path) != values_.end();
}

double ExperimentConfig::convert_display(const std::string& path, double value) {
  const auto it = schema().find(path);
  if (it == schema().end()) throw ConfigError("unknown key: " + path);
  if (it->second.unit == UnitClass::Text) throw ConfigError("textual key: " + path);
  const std::string suffix = it->second.display_suffix;
  if (suffix.empty()) return value;
  const UnitDef* unit = find_unit(suffix);
  return value * unit->to_si;
}

void ExperimentConfig::override_value(const std::string& path, double value) {
  const auto it = values_.find(path);
  if (it == values_.end()) throw ConfigError("cannot override missing key: " + path);
  if (it->second.textual) throw ConfigError("cannot numerically override textual key: " + path);
  it->second.si_value = convert_display(path, value);
}

PhysicalParams ExperimentConfig::physical_params() const {
  PhysicalParams p;
  p.temperature = get("atom.temperature");
  p.lambda1 = get("beams.lambda1");
  p.lambda2 = get("beams.lambda2");
  p.t_pi = get("timings.t_pi");
  p.t_2pi = get("timings.t_2pi");
  p.t_gap = get("timings.t_gap");
  p.t_gr = get("timings.t_gr");
  p.tau_rydberg = get("atom.rydberg_lifetime");
  p.tau_7p = get("atom.intermediate_lifetime");
  p.delta_1photon = get("atom.one_photon_detuning");
  p.omega_cz = get("beams.cz_rabi_frequency");
  p.blockade_shift = get("beams.blockade_shift");
  p.array_period = get("trap.array_period");
  p.crosstalk_w1 = get("beams.crosstalk_w1");
  p.crosstalk_w2 = get("beams.crosstalk_w2");
  p.crosstalk_omega = get("beams.crosstalk_rabi");
  p.crosstalk_stark = get("beams.crosstalk_stark");
  p.sigma_b = get("trap.magnetic_noise");
  p.g_factor_product = get("atom.g_factor_product");
  p.escape_distance = get("trap.escape_distance");
  p.trap_drop_time = get("trap.trap_drop_time");
  p.fill_fraction = get("trap.fill_fraction");
  p.eps_laser_noise = get("measured_errors.laser_noise");
  p.eps_position = get("measured_errors.position");
  p.eps_ryd_dephasing_free = get("measured_errors.ryd_dephasing_free");
  p.eps_ryd_dephasing_blockaded = get("measured_errors.ryd_dephasing_blockaded");
  p.eps_crosstalk = get("measured_errors.crosstalk");
  p.eps_uwave = get("measured_errors.uwave");
  p.eps_stark = get("measured_errors.stark");
  p.eps_readout = get("measured_errors.readout");
  p.eps_pumping = get("measured_errors.pumping");
  p.eps_measurement = get("measured_errors.measurement");
  return p;
}

BeamGeometry ExperimentConfig::beam_geometry() const {
  return BeamGeometry::resonant_at_center(get("beams.w1"), get("beams.w2"),
                                          get("beams.lambda1"), get("beams.lambda2"),
                                          get("beams.rabi_frequency"),
                                          get("beams.stark_shift_1"), get("beams.stark_shift_2"));
}

TrapDistribution ExperimentConfig::trap_distribution() const {
  return {get("trap.sigma"), get("trap.sigma_z")};
}

ThermalDriveParams ExperimentConfig::thermal_drive_params() const {
  ThermalDriveParams p;
  p.omega = get("trap.drive_rabi");
  p.delta_ls_bar = get("trap.light_shift_fraction");
  p.omega_trap = {get("trap.omega_x"), get("trap.omega_y"), get("trap.omega_z")};
  p.temperature = get("atom.temperature");
  return p;
}

BellOptions ExperimentConfig::bell_options() const {
  BellOptions opts;
  if (has("pipeline_options.loss_map")) {
    const std::string m = get_text("pipeline_options.loss_map");
    if (m == "dark_as_one")
      opts.loss_map = LossMap::DarkAsOne;
    else if (m == "dark_as_zero")
      opts.loss_map = LossMap::DarkAsZero;
    else
      throw ConfigError("pipeline_options.loss_map must be dark_as_one or dark_as_zero");
  }
  if (has("pipeline_options.renormalize_fidelity")) {
    const std::string r = get_text("pipeline_options.renormalize_fidelity");
    if (r != "true" && r != "false")
      throw ConfigError("pipeline_options.renormalize_fidelity must be true or false");
    opts.renormalize_fidelity = r == "true";
  }
  return opts;
}

double ExperimentConfig::ramsey_anchor_t2() const { return get("trap.ramsey_t2_anchor"); }
double ExperimentConfig::ramsey_anchor_temperature() const { return get("trap.ramsey_t_anchor"); }

std::uint64_t ExperimentConfig::mc_seed() const {
  return has("pipeline_options.mc_seed")
             ? static_cast<std::uint64_t>(get("pipeline_options.mc_seed"))
             : 20190607ULL;
}

std::uint64_t ExperimentConfig::mc_samples() const {
  return has("pipeline_options.mc_samples")
             ? static_cast<std::uint64_t>(get("pipeline_options.mc_samples"))
             : 1000000ULL;
}

}  // namespace rydsim
