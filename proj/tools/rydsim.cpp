// Command-line front end: budget | bell | pulse | coherence | sweep | fit.
// Emits CSV (header row with units) and a JSON mirror next to it.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rydsim/beam.hpp"
#include "rydsim/budget.hpp"
#include "rydsim/coherence.hpp"
#include "rydsim/config.hpp"
#include "rydsim/fitting.hpp"
#include "rydsim/pipeline.hpp"

using nlohmann::json;
using namespace rydsim;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << text;
}

void emit(const std::optional<std::string>& prefix, const std::string& csv, const json& js) {
  if (!prefix) return;
  write_file(*prefix + ".csv", csv);
  write_file(*prefix + ".json", js.dump(2) + "\n");
}

struct Range {
  double lo, hi;
  int n;
};

Range parse_range(const std::string& text) {
  Range r{};
  char extra = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &r.lo, &r.hi, &r.n, &extra) != 3 || r.n < 1)
    throw ConfigError("range must be lo:hi:n with n >= 1, got '" + text + "'");
  return r;
}

double range_point(const Range& r, int i) {
  if (r.n == 1) return r.lo;
  return r.lo + (r.hi - r.lo) * static_cast<double>(i) / (r.n - 1);
}

ExperimentConfig load_config(const std::string& flag_value) {
  std::string path = flag_value;
  if (path.empty()) {
    if (const char* env = std::getenv("RYDSIM_CONFIG")) path = env;
  }
  if (path.empty()) path = "configs/default.cfg";
  return ExperimentConfig::from_file(path);
}

int cmd_budget(const ExperimentConfig& cfg, const std::optional<std::string>& out) {
  const ErrorBudget b = assemble_budget(cfg.physical_params());
  std::string csv = "name,value,provenance,placement,formula\n";
  std::printf("%-28s %-12s %s\n", "channel", "strength", "provenance");
  for (const auto& row : b.rows) {
    const char* prov = row.provenance == Provenance::Calculated ? "calculated" : "measured";
    std::printf("%-28s %-12.4g %s\n", row.name.c_str(), row.value, prov);
    csv += row.name + "," + fmt(row.value) + "," + prov + "," + row.placement + "," +
           row.formula + "\n";
  }
  std::printf("T2 Doppler: %.4g us, T2 magnetic: %.4g ms, escape probability: %.3g\n",
              b.t2_doppler * 1e6, b.t2_magnetic * 1e3, b.escape_probability);
  std::printf("crosstalk Omega'/Omega = %.3g, suppressed amplitude = %.3g\n",
              b.crosstalk_omega_ratio, b.crosstalk_amplitude);
  json js;
  for (const auto& row : b.rows)
    js["rows"][row.name] = {{"value", row.value},
                            {"provenance",
                             row.provenance == Provenance::Calculated ? "calculated" : "measured"},
                            {"placement", row.placement},
                            {"formula", row.formula}};
  js["t2_doppler_s"] = b.t2_doppler;
  js["t2_magnetic_s"] = b.t2_magnetic;
  js["escape_probability"] = b.escape_probability;
  js["scattering_free"] = b.scattering_free;
  js["crosstalk_omega_ratio"] = b.crosstalk_omega_ratio;
  js["crosstalk_amplitude"] = b.crosstalk_amplitude;
  emit(out, csv, js);
  return 0;
}

int cmd_bell(const ExperimentConfig& cfg, const std::string& mode_name,
             const std::optional<std::string>& out) {
  const Mode mode = mode_from_string(mode_name);
  const ErrorBudget budget = assemble_budget(cfg.physical_params());
  const ChannelSequence seq = build_sequence(budget, mode);
  const BellResult r = run_bell(seq, cfg.bell_options());
  std::printf("mode %s\n", mode_name.c_str());
  std::printf("F_direct        = %.6f\n", r.f_direct);
  std::printf("F_experimental  = %.6f\n", r.f_experimental);
  std::printf("(P00+P11)/2     = %.6f\n", 0.5 * (r.populations[0] + r.populations[3]));
  std::printf("C               = %.6f\n", r.coherence);
  std::printf("P               = %.6f %.6f %.6f %.6f\n", r.populations[0], r.populations[1],
              r.populations[2], r.populations[3]);
  std::string csv = "phi_rad,parity\n";
  for (size_t i = 0; i < r.parity.phi.size(); ++i)
    csv += fmt(r.parity.phi[i]) + "," + fmt(r.parity.value[i]) + "\n";
  json js = {{"mode", mode_name},
             {"F_direct", r.f_direct},
             {"F_experimental", r.f_experimental},
             {"C", r.coherence},
             {"P00", r.populations[0]},
             {"P01", r.populations[1]},
             {"P10", r.populations[2]},
             {"P11", r.populations[3]}};
  emit(out, csv, js);
  return 0;
}

int cmd_pulse(const ExperimentConfig& cfg, const std::string& scan, const std::string& pulse,
              const std::optional<std::string>& out) {
  if (pulse != "pi" && pulse != "2pi") throw ConfigError("--pulse must be pi or 2pi");
  const PulseTarget target = pulse == "pi" ? PulseTarget::Pi : PulseTarget::TwoPi;
  const BeamGeometry geom = cfg.beam_geometry();
  const double sigma_z = cfg.trap_distribution().sigma_z;
  const Range range = parse_range(scan);
  const double t = nominal_pulse_time(geom, target);
  // the wavefunction phase is only meaningful when population returns, so the
  // phase-error columns accompany the 2pi curve (the pi-pulse report carries
  // the population error and its spread)
  std::string csv = target == PulseTarget::TwoPi
                        ? "sigma_um,error_mean,error_std,mean_phi_rad,one_minus_cos_phi,phi_std_rad\n"
                        : "sigma_um,error_mean,error_std\n";
  json js;
  for (int i = 0; i < range.n; ++i) {
    const double sigma_um = range_point(range, i);
    const TrapDistribution dist{sigma_um * 1e-6, sigma_z};
    double err, var;
    if (target == PulseTarget::TwoPi) {
      const auto stats = avg_population_after_pulse(geom, dist, t, 1.0);
      err = 1.0 - stats.mean;
      var = stats.variance;
      const PhaseStats phase = avg_phase_after_pulse(geom, dist, t);
      csv += fmt(sigma_um) + "," + fmt(err) + "," + fmt(std::sqrt(std::max(var, 0.0))) + "," +
             fmt(phase.mean_phi) + "," + fmt(phase.one_minus_cos) + "," + fmt(phase.stddev) +
             "\n";
    } else {
      err = 1.0 - pi_pulse_rydberg_population(geom, dist, t);
      // stay population targets zero after a pi pulse
      var = avg_population_after_pulse(geom, dist, t, 0.0).variance;
      csv += fmt(sigma_um) + "," + fmt(err) + "," + fmt(std::sqrt(std::max(var, 0.0))) + "\n";
    }
    js["points"].push_back({{"sigma_um", sigma_um}, {"error", err}});
    std::printf("sigma %.4g um: %s-pulse error %.6g\n", sigma_um, pulse.c_str(), err);
  }
  js["pulse"] = pulse;
  js["nominal_time_s"] = t;
  emit(out, csv, js);
  return 0;
}

int cmd_coherence(const ExperimentConfig& cfg, bool t2_compare,
                  const std::optional<std::string>& out) {
  ThermalDriveParams p = cfg.thermal_drive_params();
  const double anchor_t2 = cfg.ramsey_anchor_t2();
  const double anchor_temp = cfg.ramsey_anchor_temperature();
  if (!p.in_thermal_limit())
    std::fprintf(stderr, "warning: beta*omega_trap approaching 1; semiclassical limit degrades\n");

  std::string csv = "temperature_uK,t2_ramsey_s,t2_rabi_closed_s,t2_rabi_integral_root_s\n";
  json js;
  for (int i = 0; i < 8; ++i) {
    ThermalDriveParams pt = p;
    pt.temperature = 5e-6 + 5e-6 * i;
    const T2Rabi t2 = t2_rabi(pt);
    const double ramsey = t2_ramsey_static(pt.temperature, anchor_t2, anchor_temp);
    csv += fmt(pt.temperature * 1e6) + "," + fmt(ramsey) + "," + fmt(t2.closed_form) + "," +
           fmt(t2.integral_root) + "\n";
  }
  const T2Rabi at_config = t2_rabi(p);
  const double ramsey_at_config = t2_ramsey_static(p.temperature, anchor_t2, anchor_temp);
  std::printf("T = %.3g uK: T2_Ramsey = %.4g ms, T2_Rabi closed = %.4g ms, integral root = %.4g ms\n",
              p.temperature * 1e6, ramsey_at_config * 1e3, at_config.closed_form * 1e3,
              at_config.integral_root * 1e3);
  js["anchor"] = {{"temperature_uK", anchor_temp * 1e6}, {"t2_ramsey_s", anchor_t2}};
  // exact closed-form scalings, emitted as a two-point ratio check
  {
    ThermalDriveParams p2 = p;
    p2.temperature = 2.0 * p.temperature;
    js["ratio_check"]["t2_rabi_T_doubled"] = t2_rabi(p2).closed_form / at_config.closed_form;
    ThermalDriveParams p3 = p;
    p3.omega = 2.0 * p.omega;
    js["ratio_check"]["t2_rabi_omega_doubled"] = t2_rabi(p3).closed_form / at_config.closed_form;
  }
  js["t2_rabi_closed_s"] = at_config.closed_form;
  js["t2_rabi_integral_root_s"] = at_config.integral_root;
  js["t2_ramsey_s"] = ramsey_at_config;
  if (t2_compare) {
    // discrete vibrational-sum oracle against the semiclassical integrals
    const double a0 = semiclassical_a0(p);
    const auto exact0 = am_exact_sum(p, 0.0);
    const double m_root = at_config.integral_root * p.omega / (2.0 * pi);
    for (double frac : {0.25, 0.5, 1.0}) {
      const double m = std::max(1.0, std::floor(frac * m_root));
      const auto sc = semiclassical_am(p, m);
      const auto ex = am_exact_sum(p, m);
      js["oracle"].push_back({{"m", m},
                              {"semiclassical_ratio", sc.a_m / a0},
                              {"exact_sum_ratio", ex.a_m / exact0.a_m}});
      std::printf("m = %6.0f: a_m/a0 semiclassical %.4f, exact sum %.4f\n", m, sc.a_m / a0,
                  ex.a_m / exact0.a_m);
    }
  }
  emit(out, csv, js);
  return 0;
}

double budget_observable(const ErrorBudget& b, const std::string& name, bool& found) {
  found = true;
  for (const auto& row : b.rows)
    if (row.name == name) return row.value;
  found = false;
  return 0.0;
}

int cmd_sweep(const ExperimentConfig& base, const std::string& param, const std::string& range_s,
              const std::string& observable, const std::string& mode_name,
              const std::optional<std::string>& out) {
  const Range range = parse_range(range_s);
  const Mode mode = mode_from_string(mode_name);
  if (ExperimentConfig::schema().find(param) == ExperimentConfig::schema().end())
    throw ConfigError("unknown sweep parameter: " + param);
  std::string csv = param + "," + observable + "\n";
  json js;
  for (int i = 0; i < range.n; ++i) {
    const double value = range_point(range, i);
    ExperimentConfig cfg = base;
    cfg.override_value(param, value);
    PhysicalParams params = cfg.physical_params();
    if (param == "trap.fill_fraction")
      params.eps_crosstalk = crosstalk_fill_scaled(params.fill_fraction);
    const ErrorBudget budget = assemble_budget(params);
    double y = 0.0;
    bool found = false;
    if (observable == "F_direct" || observable == "F_experimental" || observable == "C" ||
        observable == "P00" || observable == "P01" || observable == "P10" ||
        observable == "P11") {
      const BellResult r = run_bell(build_sequence(budget, mode), cfg.bell_options());
      if (observable == "F_direct") y = r.f_direct;
      else if (observable == "F_experimental") y = r.f_experimental;
      else if (observable == "C") y = r.coherence;
      else if (observable == "P00") y = r.populations[0];
      else if (observable == "P01") y = r.populations[1];
      else if (observable == "P10") y = r.populations[2];
      else y = r.populations[3];
      found = true;
    } else {
      y = budget_observable(budget, observable, found);
    }
    if (!found) throw ConfigError("unknown observable: " + observable);
    csv += fmt(value) + "," + fmt(y) + "\n";
    js["points"].push_back({{"param", value}, {"value", y}});
    std::printf("%s = %.6g -> %s = %.8g\n", param.c_str(), value, observable.c_str(), y);
  }
  js["param"] = param;
  js["observable"] = observable;
  js["mode"] = mode_name;
  emit(out, csv, js);
  return 0;
}

int cmd_fit(const ExperimentConfig& cfg, const std::string& input, const std::string& model,
            const std::optional<std::string>& out) {
  if (model != "ramsey" && model != "parity") throw ConfigError("--model must be ramsey or parity");
  std::ifstream in(input);
  if (!in) throw ConfigError("cannot open input: " + input);
  std::vector<double> xs, ys;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) continue;  // header row is mandatory
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    double vals[2];
    for (int col = 0; col < 2; ++col) {
      if (!std::getline(ss, cell, ','))
        throw ConfigError(input + ": row " + std::to_string(line_no) + " has fewer than 2 columns");
      char* end = nullptr;
      vals[col] = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size())
        throw ConfigError(input + ": non-numeric cell at row " + std::to_string(line_no) +
                          ", column " + std::to_string(col + 1));
    }
    xs.push_back(vals[0]);
    ys.push_back(vals[1]);
  }
  if (xs.size() < 8) throw ConfigError("fit needs at least 8 samples over a period");
  const SinusoidFit fit = fit_sinusoid(xs, ys, model == "parity" ? 2 : 1);
  json js = {{"model", model},
             {"amplitude", fit.amplitude},
             {"phase", fit.phase},
             {"offset", fit.offset}};
  std::printf("amplitude = %.9g, phase = %.9g, offset = %.9g\n", fit.amplitude, fit.phase,
              fit.offset);
  if (model == "parity") {
    js["C"] = 0.5 * fit.amplitude;
    std::printf("C = %.9g\n", 0.5 * fit.amplitude);
  } else {
    const PhysicalParams params = cfg.physical_params();
    RamseyContext ctx{params.eps_readout, params.eps_pumping, params.eps_measurement,
                      cfg.bell_options().loss_map};
    std::vector<double> grid(64);
    for (size_t i = 0; i < grid.size(); ++i) grid[i] = 2.0 * pi * static_cast<double>(i) / 64.0;
    auto amplitude_model = [&](double eps) { return simulate_ramsey(eps, 0.0, grid, ctx); };
    const double eps = extract_epsilon(fit.amplitude, amplitude_model);
    double residual = std::abs(amplitude_model(eps) - fit.amplitude);
    js["epsilon"] = eps;
    js["residual"] = residual;
    std::printf("epsilon = %.6g (residual %.3g)\n", eps, residual);
  }
  if (out) {
    write_file(*out + ".json", js.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rydberg-blockade C_Z gate error-budget calculator and Bell-state simulator"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "config file (default: $RYDSIM_CONFIG or configs/default.cfg)");

  std::string out_str;
  auto add_out = [&](CLI::App* cmd) { cmd->add_option("--out", out_str, "output prefix for CSV/JSON"); };

  auto* budget = app.add_subcommand("budget", "error-budget table");
  add_out(budget);

  auto* bell = app.add_subcommand("bell", "Bell-state pipeline fidelities and parity curve");
  std::string mode = "full";
  bell->add_option("--mode", mode, "full|no_spam|cz_only");
  add_out(bell);

  auto* pulse = app.add_subcommand("pulse", "position-averaged pulse error curves");
  std::string scan = "0.05:0.30:26";
  std::string pulse_kind = "2pi";
  pulse->add_option("--sigma-scan", scan, "lo:hi:n in um");
  pulse->add_option("--pulse", pulse_kind, "pi|2pi");
  add_out(pulse);

  auto* coherence = app.add_subcommand("coherence", "driven vs static coherence times");
  bool t2_compare = false;
  coherence->add_flag("--t2-compare", t2_compare, "add the discrete vibrational-sum oracle");
  add_out(coherence);

  auto* sweep = app.add_subcommand("sweep", "1D parameter sweep of any observable");
  std::string param, range_s, observable;
  std::string sweep_mode = "full";
  sweep->add_option("--param", param, "config path, e.g. atom.temperature")->required();
  sweep->add_option("--range", range_s, "lo:hi:n in the key's display unit")->required();
  sweep->add_option("--observable", observable, "F_direct|F_experimental|C|P..|budget row")->required();
  sweep->add_option("--mode", sweep_mode, "pipeline mode for fidelity observables");
  add_out(sweep);

  auto* fit = app.add_subcommand("fit", "fit a measured curve and invert the error model");
  std::string input, model;
  fit->add_option("--input", input, "CSV with header and x,y columns")->required();
  fit->add_option("--model", model, "ramsey|parity")->required();
  add_out(fit);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    const std::optional<std::string> out =
        out_str.empty() ? std::nullopt : std::optional<std::string>(out_str);
    const ExperimentConfig cfg = load_config(config_path);
    if (budget->parsed()) return cmd_budget(cfg, out);
    if (bell->parsed()) return cmd_bell(cfg, mode, out);
    if (pulse->parsed()) return cmd_pulse(cfg, scan, pulse_kind, out);
    if (coherence->parsed()) return cmd_coherence(cfg, t2_compare, out);
    if (sweep->parsed()) return cmd_sweep(cfg, param, range_s, observable, sweep_mode, out);
    if (fit->parsed()) return cmd_fit(cfg, input, model, out);
  } catch (const ConvergenceError& e) {
    std::cerr << "numerical convergence failure: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
