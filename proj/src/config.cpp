#include "mdce/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace mdce {

ConfigError::ConfigError(int line_, std::string field_, const std::string& message)
    : std::invalid_argument((line_ > 0 ? "line " + std::to_string(line_) + ": " : std::string()) +
                            (field_.empty() ? std::string() : field_ + ": ") + message),
      line(line_),
      field(std::move(field_)) {}

namespace {

constexpr std::pair<Command, std::string_view> kCommands[] = {
    {Command::traj, "traj"},         {Command::drive, "drive"},   {Command::flux, "flux"},
    {Command::spectrum, "spectrum"}, {Command::sweep, "sweep"},   {Command::params, "params"},
    {Command::reproduce, "reproduce"},
};

int line_of(const YAML::Node& node) { return node.Mark().line >= 0 ? node.Mark().line + 1 : 0; }

void check_keys(const YAML::Node& map, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!map.IsMap()) throw ConfigError(line_of(map), where, "expected a mapping");
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      std::string list;
      for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
      throw ConfigError(line_of(kv.first), where.empty() ? key : where + "." + key,
                        "unknown key (allowed: " + list + ")");
    }
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& field, const char* type_name) {
  if (!node.IsScalar()) throw ConfigError(line_of(node), field, std::string("expected ") + type_name);
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(line_of(node), field, std::string("expected ") + type_name + ", got '" + node.Scalar() + "'");
  }
}

double number(const YAML::Node& node, const std::string& field) {
  const double x = scalar<double>(node, field, "a number");
  if (!std::isfinite(x)) throw ConfigError(line_of(node), field, "must be finite");
  return x;
}

double positive(const YAML::Node& node, const std::string& field) {
  const double x = number(node, field);
  if (!(x > 0.0)) throw ConfigError(line_of(node), field, "must be positive");
  return x;
}

int integer(const YAML::Node& node, const std::string& field, int lo) {
  const int x = scalar<int>(node, field, "an integer");
  if (x < lo) throw ConfigError(line_of(node), field, "must be >= " + std::to_string(lo));
  return x;
}

template <class F>
auto parsed(const YAML::Node& node, const std::string& field, F&& parse) {
  const auto text = scalar<std::string>(node, field, "a string");
  try {
    return parse(text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(line_of(node), field, e.what());
  }
}

std::vector<double> number_list(const YAML::Node& node, const std::string& field, bool allow_zero) {
  std::vector<double> out;
  auto one = [&](const YAML::Node& n) {
    const double x = number(n, field);
    if (allow_zero ? !(x >= 0.0) : !(x > 0.0))
      throw ConfigError(line_of(n), field, allow_zero ? "values must be >= 0" : "values must be positive");
    out.push_back(x);
  };
  if (node.IsSequence()) {
    for (const auto& n : node) one(n);
  } else {
    one(node);
  }
  if (out.empty()) throw ConfigError(line_of(node), field, "must not be empty");
  return out;
}

}  // namespace

std::string_view to_string(Command c) {
  for (const auto& [cmd, name] : kCommands)
    if (cmd == c) return name;
  return "?";
}

Command parse_command(std::string_view text) {
  for (const auto& [cmd, name] : kCommands)
    if (text == name) return cmd;
  throw std::invalid_argument("unknown command '" + std::string(text) +
                              "' (expected traj, drive, flux, spectrum, sweep, params or reproduce)");
}

OutputFormat parse_output_format(std::string_view text) {
  if (text == "split") return OutputFormat::split;
  if (text == "long") return OutputFormat::long_table;
  throw std::invalid_argument("unknown output format '" + std::string(text) + "' (expected split or long)");
}

void RunConfig::validate() const {
  if (trajectory.A && trajectory.abar_target)
    throw ConfigError(0, "trajectory", "set exactly one of A and abar_target");
  if (trajectory.A && !(*trajectory.A > 0.0)) throw ConfigError(0, "trajectory.A", "must be positive");
  if (trajectory.abar_target && !(*trajectory.abar_target > 0.0))
    throw ConfigError(0, "trajectory.abar_target", "must be positive");
  if (trajectory.f_d && !(*trajectory.f_d > 0.0)) throw ConfigError(0, "trajectory.f_d", "must be positive");
  if (ej0_ratio_set && physics.modulation_depth)
    throw ConfigError(0, "physics.modulation_depth", "cannot be combined with circuit.EJ0_ratio");
  if (physics.modulation_depth && (!(*physics.modulation_depth > 0.0) || *physics.modulation_depth > kMaxModulationDepth))
    throw ConfigError(0, "physics.modulation_depth", "must lie in (0, 0.5]");
  if (!(physics.T >= 0.0)) throw ConfigError(0, "physics.T", "must be >= 0");
  if (physics.n_max < 0) throw ConfigError(0, "physics.n_max", "must be >= 0");
  if (physics.samples < 8 * std::max(physics.n_max, 1))
    throw ConfigError(0, "physics.samples", "must be at least 8 n_max");
  if (sweep.points < 2) throw ConfigError(0, "sweep.points", "must be >= 2");
  if (flux.samples_per_period < 2) throw ConfigError(0, "flux.samples_per_period", "must be >= 2");
  if (flux.periods < 1) throw ConfigError(0, "flux.periods", "must be >= 1");
  try {
    circuit.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, "circuit", e.what());
  }
}

TrajectoryParams RunConfig::resolve_trajectory() const {
  if (!trajectory.kind) throw ConfigError(0, "trajectory.kind", "required");
  if (!trajectory.f_d) throw ConfigError(0, "trajectory.f_d", "required");
  if (trajectory.A.has_value() == trajectory.abar_target.has_value())
    throw ConfigError(0, "trajectory", "set exactly one of A and abar_target");
  const double omega_d = constants::two_pi * *trajectory.f_d;
  const double A = trajectory.A ? *trajectory.A
                                : solve_acceleration_parameter(*trajectory.kind, *trajectory.abar_target, omega_d, circuit.v);
  TrajectoryParams p{*trajectory.kind, A, omega_d, circuit.v};
  p.validate();
  return p;
}

CircuitParams RunConfig::resolve_circuit(const TrajectoryParams& p) const {
  if (physics.modulation_depth) return bias_for_modulation_depth(p, circuit, *physics.modulation_depth, physics.samples);
  return circuit;
}

RunConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.mark.line + 1, "", "malformed document: " + e.msg);
  }
  RunConfig cfg;
  if (root.IsNull()) return cfg;
  check_keys(root, "", {"command", "figure", "trajectory", "circuit", "physics", "sweep", "flux", "output"});

  if (auto n = root["command"]) cfg.command = parsed(n, "command", parse_command);
  if (auto n = root["figure"]) cfg.figure = parsed(n, "figure", parse_figure);

  if (auto t = root["trajectory"]; t && !t.IsNull()) {
    check_keys(t, "trajectory", {"kind", "A", "abar_target", "f_d", "v"});
    if (auto n = t["kind"]) cfg.trajectory.kind = parsed(n, "trajectory.kind", parse_trajectory_kind);
    if (auto n = t["A"]) cfg.trajectory.A = positive(n, "trajectory.A");
    if (auto n = t["abar_target"]) cfg.trajectory.abar_target = positive(n, "trajectory.abar_target");
    if (t["A"] && t["abar_target"])
      throw ConfigError(line_of(t["abar_target"]), "trajectory.abar_target", "set exactly one of A and abar_target");
    if (auto n = t["f_d"]) cfg.trajectory.f_d = positive(n, "trajectory.f_d");
    if (auto n = t["v"]) cfg.circuit.v = positive(n, "trajectory.v");
  }

  if (auto c = root["circuit"]; c && !c.IsNull()) {
    check_keys(c, "circuit", {"C_J", "I_c", "Z0", "v", "f_s", "EJ0_ratio"});
    if (auto n = c["C_J"]) cfg.circuit.C_J = positive(n, "circuit.C_J");
    if (auto n = c["I_c"]) cfg.circuit.I_c = positive(n, "circuit.I_c");
    if (auto n = c["Z0"]) cfg.circuit.Z0 = positive(n, "circuit.Z0");
    if (auto n = c["v"]) {
      const double v = positive(n, "circuit.v");
      if (root["trajectory"] && root["trajectory"]["v"] && v != cfg.circuit.v)
        throw ConfigError(line_of(n), "circuit.v", "differs from trajectory.v");
      cfg.circuit.v = v;
    }
    if (auto n = c["f_s"]) cfg.circuit.omega_s = constants::two_pi * positive(n, "circuit.f_s");
    if (auto n = c["EJ0_ratio"]) {
      cfg.circuit.EJ0_ratio = positive(n, "circuit.EJ0_ratio");
      cfg.ej0_ratio_set = true;
    }
  }

  if (auto p = root["physics"]; p && !p.IsNull()) {
    check_keys(p, "physics", {"T", "n_max", "samples", "modulation_depth"});
    if (auto n = p["T"]) {
      cfg.physics.T = number(n, "physics.T");
      if (cfg.physics.T < 0.0) throw ConfigError(line_of(n), "physics.T", "must be >= 0");
    }
    if (auto n = p["n_max"]) cfg.physics.n_max = integer(n, "physics.n_max", 0);
    if (auto n = p["samples"]) cfg.physics.samples = integer(n, "physics.samples", 8);
    if (auto n = p["modulation_depth"]) {
      if (cfg.ej0_ratio_set)
        throw ConfigError(line_of(n), "physics.modulation_depth", "cannot be combined with circuit.EJ0_ratio");
      cfg.physics.modulation_depth = positive(n, "physics.modulation_depth");
    }
  }

  if (auto s = root["sweep"]; s && !s.IsNull()) {
    check_keys(s, "sweep", {"axis", "min", "max", "points", "relative", "open", "fixed", "temperatures", "trajectories"});
    if (auto n = s["axis"]) cfg.sweep.axis = parsed(n, "sweep.axis", parse_sweep_axis);
    if (auto n = s["min"]) cfg.sweep.min = number(n, "sweep.min");
    if (auto n = s["max"]) cfg.sweep.max = number(n, "sweep.max");
    if (auto n = s["points"]) cfg.sweep.points = integer(n, "sweep.points", 2);
    if (auto n = s["relative"]) cfg.sweep.relative = scalar<bool>(n, "sweep.relative", "true or false");
    if (auto n = s["open"]) cfg.sweep.open = scalar<bool>(n, "sweep.open", "true or false");
    if (auto n = s["fixed"]) cfg.sweep.fixed = number_list(n, "sweep.fixed", false);
    if (auto n = s["temperatures"]) cfg.sweep.temperatures = number_list(n, "sweep.temperatures", true);
    if (auto n = s["trajectories"]) {
      auto add = [&](const YAML::Node& k) {
        cfg.sweep.trajectories.push_back(parsed(k, "sweep.trajectories", parse_trajectory_kind));
      };
      if (n.IsSequence()) {
        for (const auto& k : n) add(k);
      } else {
        add(n);
      }
    }
  }

  if (auto f = root["flux"]; f && !f.IsNull()) {
    check_keys(f, "flux", {"samples_per_period", "periods"});
    if (auto n = f["samples_per_period"]) cfg.flux.samples_per_period = integer(n, "flux.samples_per_period", 2);
    if (auto n = f["periods"]) cfg.flux.periods = integer(n, "flux.periods", 1);
  }

  if (auto o = root["output"]; o && !o.IsNull()) {
    check_keys(o, "output", {"path", "format"});
    if (auto n = o["path"]) cfg.output.path = scalar<std::string>(n, "output.path", "a string");
    if (auto n = o["format"]) cfg.output.format = parsed(n, "output.format", parse_output_format);
  }

  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(0, "", "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace mdce
