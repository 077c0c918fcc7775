#include "mdce/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

#include "mdce/numerics.hpp"

namespace mdce {

namespace {

using constants::two_pi;

std::string fmt17(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Selection
// ---------------------------------------------------------------------------

void SelectionCriteria::validate() const {
  if (!(abar_target > 0.0)) throw std::invalid_argument("selection: abar_target must be positive");
  if (!(ejo_ratio_min > 0.0) || ejo_ratio_min > 1.0)
    throw std::invalid_argument("selection: ejo_ratio_min must lie in (0, 1]");
  if (!(omega_d_max > 0.0)) throw std::invalid_argument("selection: omega_d_max must be positive");
  if (!(modulation_depth > 0.0) || modulation_depth > kMaxModulationDepth)
    throw std::invalid_argument("selection: modulation_depth must lie in (0, 0.5]");
}

namespace {

struct Candidate {
  double margin = -1.0;  // ≥ 0 when feasible
  std::vector<SelectedTrajectory> trajectories;
};

Candidate evaluate_candidate(std::span<const TrajectoryKind> kinds, const SelectionCriteria& crit,
                             const CircuitParams& c, double omega_d) {
  Candidate out;
  double margin = std::numeric_limits<double>::infinity();
  for (auto kind : kinds) {
    SelectedTrajectory sel;
    try {
      const double A = solve_acceleration_parameter(kind, crit.abar_target, omega_d, c.v);
      sel.params = {kind, A, omega_d, c.v};
      const CircuitParams biased = bias_for_modulation_depth(sel.params, c, crit.modulation_depth);
      sel.abar = average_acceleration(sel.params);
      sel.EJ0_ratio = biased.EJ0_ratio;
      sel.first_harmonic = effective_length(biased) * crit.modulation_depth;
      margin = std::min(margin, sel.EJ0_ratio / crit.ejo_ratio_min - 1.0);
      margin = std::min(margin, 1.0 - sel.EJ0_ratio / 2.0);
      if (kind == TrajectoryKind::sinusoidal_motion)
        margin = std::min(margin, 1.0 - sel.params.sm_amplitude() * crit.omega_d_max / c.v);
      (void)trajectory_to_drive(sel.params, biased);
    } catch (const ConstraintViolation&) {
      out.margin = -1.0;
      return out;
    }
    out.trajectories.push_back(sel);
  }
  out.margin = margin;
  return out;
}

}  // namespace

Selection select_parameters(std::span<const TrajectoryKind> kinds, const SelectionCriteria& crit,
                            const CircuitParams& c) {
  crit.validate();
  c.validate();
  if (kinds.empty()) throw std::invalid_argument("select_parameters: no trajectories given");

  // The driving frequency must stay below the plasma frequency.
  const double upper = std::min(crit.omega_d_max, c.omega_s * (1.0 - 1e-12));
  auto margin = [&](double w) { return evaluate_candidate(kinds, crit, c, w).margin; };

  if (margin(upper) < 0.0) {
    throw ConstraintViolation("select_parameters: no feasible driving frequency below " +
                              fmt17(upper / two_pi) + " Hz for abar = " + fmt17(crit.abar_target));
  }
  // Feasibility holds on an interval [ω_min, upper]; scan downwards for its edge.
  constexpr int kScan = 240;
  const double lowest = upper * 1e-3;
  double feasible = upper;
  double infeasible = -1.0;
  for (int i = 1; i <= kScan; ++i) {
    const double w = upper * std::pow(lowest / upper, static_cast<double>(i) / kScan);
    if (margin(w) >= 0.0) {
      feasible = w;
    } else {
      infeasible = w;
      break;
    }
  }
  double best = feasible;
  if (infeasible > 0.0) {
    best = numerics::find_root(margin, infeasible, feasible, 1e-12);
    for (int i = 0; i < 64 && margin(best) <= 0.0; ++i) best *= 1.0 + 1e-12;
  }

  Selection out;
  out.omega_d = best;
  out.omega_d_upper = upper;
  out.trajectories = evaluate_candidate(kinds, crit, c, best).trajectories;
  if (std::find(kinds.begin(), kinds.end(), TrajectoryKind::sinusoidal_motion) != kinds.end()) {
    auto amplitude = [&](double w) {
      return solve_acceleration_parameter(TrajectoryKind::sinusoidal_motion, crit.abar_target, w, c.v) / (w * w);
    };
    out.sm_amplitude_range = std::make_pair(amplitude(upper), amplitude(best));
  }
  return out;
}

Selection select_parameters(TrajectoryKind kind, const SelectionCriteria& crit, const CircuitParams& c) {
  const TrajectoryKind kinds[] = {kind};
  return select_parameters(kinds, crit, c);
}

// ---------------------------------------------------------------------------
// Names
// ---------------------------------------------------------------------------

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::omega: return "omega";
    case SweepAxis::omega_d: return "omega_d";
    case SweepAxis::abar: return "abar";
  }
  return "?";
}

SweepAxis parse_sweep_axis(std::string_view text) {
  const auto s = lower(text);
  if (s == "omega" || s == "w") return SweepAxis::omega;
  if (s == "omega_d" || s == "wd") return SweepAxis::omega_d;
  if (s == "abar") return SweepAxis::abar;
  throw std::invalid_argument("unknown sweep axis '" + std::string(text) + "' (expected omega, omega_d or abar)");
}

namespace {
constexpr std::pair<FigureId, std::string_view> kFigureNames[] = {
    {FigureId::worldlines, "worldlines"},     {FigureId::fourier, "fourier"},
    {FigureId::nout_vs_w_T, "nout_vs_w_T"},   {FigureId::nout_vs_w, "nout_vs_w"},
    {FigureId::nout_vs_wd, "nout_vs_wd"},     {FigureId::nout_vs_abar, "nout_vs_abar"},
    {FigureId::compare3_w, "compare3_w"},     {FigureId::compare3_abar, "compare3_abar"},
};
}  // namespace

std::string_view to_string(FigureId id) {
  for (const auto& [fig, name] : kFigureNames)
    if (fig == id) return name;
  return "?";
}

int figure_number(FigureId id) {
  int n = 1;
  for (const auto& [fig, name] : kFigureNames) {
    if (fig == id) return n;
    ++n;
  }
  return 0;
}

FigureId parse_figure(std::string_view text) {
  const auto s = lower(text);
  for (const auto& [fig, name] : kFigureNames) {
    if (s == lower(name) || s == "fig" + std::to_string(figure_number(fig))) return fig;
  }
  throw std::invalid_argument("unknown figure '" + std::string(text) + "' (expected fig1..fig8)");
}

// ---------------------------------------------------------------------------
// Sweep specification
// ---------------------------------------------------------------------------

void Grid::validate() const {
  if (points < 2) throw std::invalid_argument("grid: need at least 2 points");
  if (!std::isfinite(min) || !std::isfinite(max) || !(max > min))
    throw std::invalid_argument("grid: require finite min < max");
}

std::vector<double> Grid::values() const {
  validate();
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double frac = open ? static_cast<double>(i + 1) / (points + 1) : static_cast<double>(i) / (points - 1);
    out[static_cast<std::size_t>(i)] = min + (max - min) * frac;
  }
  return out;
}

double AccelerationSpec::at(double omega_d, double v) const {
  if (reference_kind) return average_acceleration({*reference_kind, reference_A, omega_d, v});
  return abar;
}

void SweepSpec::validate() const {
  grid.validate();
  if (panels.empty()) throw std::invalid_argument("sweep: at least one panel value is required");
  for (double p : panels)
    if (!(p > 0.0)) throw std::invalid_argument("sweep: panel values must be positive");
  if (trajectories.empty()) throw std::invalid_argument("sweep: no trajectories");
  if (temperatures.empty()) throw std::invalid_argument("sweep: no temperatures");
  for (double T : temperatures)
    if (!(T >= 0.0)) throw std::invalid_argument("sweep: temperatures must be >= 0");
  if (n_max < 0 || samples < 8 * std::max(n_max, 1)) throw std::invalid_argument("sweep: need samples >= 8 n_max");
  if (modulation_depth < 0.0 || modulation_depth > kMaxModulationDepth)
    throw std::invalid_argument("sweep: modulation_depth must lie in [0, 0.5]");
  if (axis == SweepAxis::abar) {
    if (!(omega_d > 0.0)) throw std::invalid_argument("sweep: axis abar needs a fixed omega_d");
    if (!(grid.min > 0.0)) throw std::invalid_argument("sweep: abar grid must be positive");
  } else {
    if (!acceleration.reference_kind && !(acceleration.abar > 0.0))
      throw std::invalid_argument("sweep: abar must be positive");
    if (!(grid.min >= 0.0)) throw std::invalid_argument("sweep: frequency grid must be non-negative");
  }
}

SweepSpec preset_sweep(FigureId id) {
  using K = TrajectoryKind;
  const double f146 = two_pi * 14.6e9;
  SweepSpec s;
  s.figure = id;
  switch (id) {
    case FigureId::nout_vs_w_T:
      s.axis = SweepAxis::omega;
      s.grid = {0.0, 3.0, 401, true};
      s.grid_relative = true;
      s.panels = {f146};
      s.trajectories = {K::sinusoidal_acceleration, K::alternating_uniform};
      s.temperatures = {0.0, 0.025, 0.050};
      s.acceleration.abar = 20e18;
      return s;
    case FigureId::nout_vs_w:
      // α fixed at the 14.6 GHz selection; both trajectories share the ā it gives.
      s.axis = SweepAxis::omega;
      s.grid = {0.0, 3.0, 401, true};
      s.grid_relative = true;
      s.panels = {two_pi * 5e9, two_pi * 15e9};
      s.trajectories = {K::sinusoidal_acceleration, K::alternating_uniform};
      s.temperatures = {0.0, 0.025};
      s.acceleration.reference_kind = K::sinusoidal_acceleration;
      s.acceleration.reference_A = 13.725e18;
      return s;
    case FigureId::nout_vs_wd:
      s.axis = SweepAxis::omega_d;
      s.grid = {two_pi * 2e9, two_pi * 36e9, 401, false};
      s.panels = {two_pi * 5e9, two_pi * 10e9};
      s.trajectories = {K::sinusoidal_acceleration, K::alternating_uniform};
      s.temperatures = {0.0, 0.025};
      s.acceleration.abar = 20e18;
      return s;
    case FigureId::nout_vs_abar:
      s.axis = SweepAxis::abar;
      s.grid = {5e18, 30e18, 401, false};
      s.omega_d = f146;
      s.panels = {0.25 * f146, 0.5 * f146, 0.75 * f146};
      s.trajectories = {K::sinusoidal_acceleration, K::alternating_uniform};
      s.temperatures = {0.0, 0.025};
      return s;
    case FigureId::compare3_w:
      s.axis = SweepAxis::omega;
      s.grid = {0.0, 1.0, 401, true};
      s.grid_relative = true;
      s.panels = {two_pi * 18e9};
      s.trajectories = {K::sinusoidal_motion, K::sinusoidal_acceleration, K::alternating_uniform};
      s.temperatures = {0.0};
      s.acceleration.abar = 9.054e17;
      s.modulation_depth = 0.0;
      return s;
    case FigureId::compare3_abar:
      s.axis = SweepAxis::abar;
      // Bias kept at the circuit value; above ~1.8e18 the first harmonic
      // exceeds half of E_J⁰ at this bias.
      s.grid = {1e17, 1.8e18, 401, false};
      s.omega_d = two_pi * 18e9;
      s.panels = {two_pi * 9e9};
      s.trajectories = {K::sinusoidal_motion, K::sinusoidal_acceleration, K::alternating_uniform};
      s.temperatures = {0.0};
      s.modulation_depth = 0.0;
      return s;
    case FigureId::worldlines:
    case FigureId::fourier:
      break;
  }
  throw std::invalid_argument("preset_sweep: " + std::string(to_string(id)) + " is not a spectrum sweep");
}

std::optional<std::string> SpectrumDataset::meta(std::string_view key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return v;
  return std::nullopt;
}

std::size_t SweepResult::panel_of(std::size_t curve) const {
  return curve / (spec.trajectories.size() * spec.temperatures.size());
}

SweepConfiguration configure(const SweepSpec& s, const CircuitParams& c, TrajectoryKind kind,
                             double omega_d, double abar) {
  SweepConfiguration cfg;
  const double A = solve_acceleration_parameter(kind, abar, omega_d, c.v);
  cfg.params = {kind, A, omega_d, c.v};
  cfg.circuit = s.modulation_depth > 0.0 ? bias_for_modulation_depth(cfg.params, c, s.modulation_depth, s.samples) : c;
  cfg.drive = trajectory_to_drive(cfg.params, cfg.circuit, s.n_max, s.samples);
  return cfg;
}

// ---------------------------------------------------------------------------
// Sweep evaluation
// ---------------------------------------------------------------------------

namespace {

struct ConfigSlot {
  std::optional<SweepConfiguration> cfg;
  std::string error;
};

struct PointSlot {
  bool ok = false;
  double x = 0.0;
  double n_out = 0.0;
  std::string error;
  std::vector<ValidityCheck> issues;
};

}  // namespace

SweepResult run_sweep(const SweepSpec& s, const CircuitParams& c, Execution exec) {
  s.validate();
  c.validate();
  const std::vector<double> grid = s.grid.values();
  const std::size_t n = grid.size();
  const std::size_t kinds = s.trajectories.size();
  const std::size_t temps = s.temperatures.size();
  const std::size_t panels = s.panels.size();
  const bool per_panel_drive = s.axis == SweepAxis::omega;

  // Drive configurations: one per (panel, kind) on the ω axis, otherwise one
  // per (kind, grid point) shared by all panels.
  const std::size_t config_count = per_panel_drive ? panels * kinds : kinds * n;
  std::vector<ConfigSlot> configs(config_count);
  for_each_index(config_count, exec, [&](std::size_t j) {
    double omega_d = 0.0, abar = 0.0;
    std::size_t kind_index = 0;
    if (per_panel_drive) {
      kind_index = j % kinds;
      omega_d = s.panels[j / kinds];
      abar = s.acceleration.at(omega_d, c.v);
    } else {
      kind_index = j / n;
      const double x = grid[j % n];
      omega_d = s.axis == SweepAxis::omega_d ? x : s.omega_d;
      abar = s.axis == SweepAxis::abar ? x : s.acceleration.at(omega_d, c.v);
    }
    try {
      configs[j].cfg = configure(s, c, s.trajectories[kind_index], omega_d, abar);
    } catch (const std::exception& e) {
      configs[j].error = e.what();
    }
  });

  auto config_index = [&](std::size_t panel, std::size_t kind, std::size_t i) {
    return per_panel_drive ? panel * kinds + kind : kind * n + i;
  };

  const std::size_t curve_count = panels * kinds * temps;
  std::vector<PointSlot> points(curve_count * n);
  for_each_index(points.size(), exec, [&](std::size_t flat) {
    const std::size_t curve = flat / n;
    const std::size_t i = flat % n;
    const std::size_t panel = curve / (kinds * temps);
    const std::size_t kind = (curve / temps) % kinds;
    const double T = s.temperatures[curve % temps];
    PointSlot& slot = points[flat];
    const ConfigSlot& cs = configs[config_index(panel, kind, i)];
    if (s.axis == SweepAxis::omega) slot.x = s.grid_relative ? grid[i] * s.panels[panel] : grid[i];
    else slot.x = grid[i];
    if (!cs.cfg) {
      slot.error = cs.error;
      return;
    }
    const double omega = s.axis == SweepAxis::omega ? slot.x : s.panels[panel];
    try {
      slot.n_out = output_spectrum(omega, cs.cfg->drive, cs.cfg->circuit, ThermalInput{T});
      slot.ok = std::isfinite(slot.n_out) && slot.n_out >= 0.0;
      if (!slot.ok) slot.error = "n_out not finite/non-negative: " + fmt17(slot.n_out);
      const double probe[] = {omega};
      for (auto& check : validate(cs.cfg->drive, cs.cfg->params, cs.cfg->circuit, probe, T).checks)
        if (check.status != CheckStatus::ok) slot.issues.push_back(std::move(check));
    } catch (const std::exception& e) {
      slot.error = e.what();
    }
  });

  SweepResult result;
  result.spec = s;
  result.curves.reserve(curve_count);
  for (std::size_t curve = 0; curve < curve_count; ++curve) {
    const std::size_t panel = curve / (kinds * temps);
    const std::size_t kind = (curve / temps) % kinds;
    const double T = s.temperatures[curve % temps];

    SpectrumDataset ds;
    ds.axis = s.axis;
    ds.trajectory = std::string(to_string(s.trajectories[kind]));
    ds.temperature = T;
    auto& m = ds.metadata;
    m.emplace_back("figure", std::string(to_string(s.figure)));
    m.emplace_back("axis", std::string(to_string(s.axis)));
    m.emplace_back("x_unit", s.axis == SweepAxis::abar ? "m/s^2" : "rad/s");
    m.emplace_back("trajectory", ds.trajectory);
    m.emplace_back("temperature_K", fmt17(T));
    if (s.axis == SweepAxis::omega) {
      m.emplace_back("omega_d", fmt17(s.panels[panel]));
      m.emplace_back("f_d_Hz", fmt17(s.panels[panel] / two_pi));
    } else {
      m.emplace_back("omega", fmt17(s.panels[panel]));
      m.emplace_back("f_Hz", fmt17(s.panels[panel] / two_pi));
      if (s.axis == SweepAxis::abar) {
        m.emplace_back("omega_d", fmt17(s.omega_d));
        m.emplace_back("f_d_Hz", fmt17(s.omega_d / two_pi));
      }
    }
    if (s.axis != SweepAxis::abar) {
      if (s.acceleration.reference_kind) {
        m.emplace_back("abar_rule", "from reference " + std::string(to_string(*s.acceleration.reference_kind)) +
                                        " with A = " + fmt17(s.acceleration.reference_A));
      } else {
        m.emplace_back("abar", fmt17(s.acceleration.abar));
      }
    }
    if (per_panel_drive) {
      const auto& cs = configs[config_index(panel, kind, 0)];
      if (cs.cfg) {
        m.emplace_back("abar_resolved", fmt17(average_acceleration(cs.cfg->params)));
        m.emplace_back("A", fmt17(cs.cfg->params.A));
        m.emplace_back("EJ0_ratio_resolved", fmt17(cs.cfg->circuit.EJ0_ratio));
        m.emplace_back("L_eff0_m", fmt17(effective_length(cs.cfg->circuit)));
      }
    } else {
      m.emplace_back("A", "solved per point from abar");
    }
    m.emplace_back("v", fmt17(c.v));
    m.emplace_back("C_J", fmt17(c.C_J));
    m.emplace_back("I_c", fmt17(c.I_c));
    m.emplace_back("Z0", fmt17(c.Z0));
    m.emplace_back("omega_s", fmt17(c.omega_s));
    m.emplace_back("f_s_Hz", fmt17(c.omega_s / two_pi));
    m.emplace_back("EJ0_ratio", s.modulation_depth > 0.0 ? "from modulation depth" : fmt17(c.EJ0_ratio));
    m.emplace_back("modulation_depth", fmt17(s.modulation_depth));
    m.emplace_back("n_max", std::to_string(s.n_max));
    m.emplace_back("fourier_samples", std::to_string(s.samples));
    m.emplace_back("root_tol", "1e-14");
    m.emplace_back("grid_min", fmt17(s.grid.min));
    m.emplace_back("grid_max", fmt17(s.grid.max));
    m.emplace_back("grid_points", std::to_string(s.grid.points));
    m.emplace_back("grid_open", s.grid.open ? "1" : "0");
    m.emplace_back("grid_relative", s.grid_relative ? "1" : "0");

    // Validity issues aggregated over the curve, in check order.
    std::vector<std::string> order;
    std::map<std::string, std::pair<int, std::string>> tally;
    std::size_t failed = 0;
    Metadata failures;
    for (std::size_t i = 0; i < n; ++i) {
      const PointSlot& p = points[curve * n + i];
      if (!p.ok) {
        ++failed;
        failures.emplace_back("failure." + std::to_string(i), p.error);
        continue;
      }
      ds.points.push_back({p.x, p.n_out});
      for (const auto& issue : p.issues) {
        const std::string key = issue.name + "." + std::string(to_string(issue.status));
        auto [it, inserted] = tally.try_emplace(key, 0, issue.detail);
        if (inserted) order.push_back(key);
        ++it->second.first;
      }
    }
    for (const auto& key : order) {
      const auto& [count, detail] = tally[key];
      m.emplace_back("validity." + key, std::to_string(count) + "/" + std::to_string(n) + " points; first: " + detail);
    }
    m.emplace_back("points_failed", std::to_string(failed));
    m.insert(m.end(), failures.begin(), failures.end());
    result.curves.push_back(std::move(ds));
  }
  return result;
}

std::vector<WorldlineCurve> worldline_dataset(std::span<const TrajectoryKind> kinds, double abar,
                                              double omega_d, double v, int points, Execution exec) {
  std::vector<WorldlineCurve> out;
  for (auto kind : kinds) {
    WorldlineCurve curve;
    curve.params = {kind, solve_acceleration_parameter(kind, abar, omega_d, v), omega_d, v};
    curve.samples = sample_period(curve.params, points, exec);
    out.push_back(std::move(curve));
  }
  return out;
}

std::vector<FourierCurve> fourier_dataset(std::span<const TrajectoryKind> kinds, double abar,
                                          double omega_d, const CircuitParams& c, int n_max,
                                          double modulation_depth, int samples) {
  std::vector<FourierCurve> out;
  for (auto kind : kinds) {
    FourierCurve curve;
    curve.params = {kind, solve_acceleration_parameter(kind, abar, omega_d, c.v), omega_d, c.v};
    curve.circuit = bias_for_modulation_depth(curve.params, c, modulation_depth, samples);
    curve.drive = trajectory_to_drive(curve.params, curve.circuit, n_max, samples);
    out.push_back(std::move(curve));
  }
  return out;
}

}  // namespace mdce
