#include "kerr/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kerr/constitutive.hpp"
#include "kerr/relax_kd.hpp"
#include "kerr/riemann66.hpp"
#include "kerr/riemann_tm.hpp"
#include "kerr/wavecurves.hpp"

#ifndef KERR_BUILD_ID
#define KERR_BUILD_ID "unknown"
#endif

namespace kerr {
namespace {

using json = nlohmann::json;

const json& require(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) throw ConfigError("missing field '" + ctx + key + "'");
  return j.at(key);
}

Vec3 vec3_from(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != 3)
    throw ConfigError("field '" + ctx + "' must be an array of 3 numbers");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

State66 state_from(const json& j, double mu0, const std::string& ctx) {
  const Vec3 D = vec3_from(require(j, "d_c_per_m2", ctx + "."), ctx + ".d_c_per_m2");
  const Vec3 B = vec3_from(require(j, "mu0_h_tesla", ctx + "."), ctx + ".mu0_h_tesla");
  return State66(D, B / mu0);
}

json state_to_json(const State66& u, double mu0) {
  json j;
  j["d_c_per_m2"] = {u.D[0], u.D[1], u.D[2]};
  j["mu0_h_tesla"] = {mu0 * u.H[0], mu0 * u.H[1], mu0 * u.H[2]};
  return j;
}

json state_echo_json(const State66& u, double mu0) {
  json j = state_to_json(u, mu0);
  j["h_a_per_m"] = {u.H[0], u.H[1], u.H[2]};
  return j;
}

BoundaryKind boundary_from(const std::string& name, const std::string& ctx) {
  if (name == "outflow") return BoundaryKind::outflow;
  if (name == "dirichlet_timed") return BoundaryKind::dirichlet_timed;
  if (name == "reflect_symmetry") return BoundaryKind::reflect_symmetry;
  throw ConfigError("field '" + ctx + "': unknown boundary kind '" + name + "'");
}

const char* boundary_name(BoundaryKind k) {
  switch (k) {
    case BoundaryKind::outflow: return "outflow";
    case BoundaryKind::dirichlet_timed: return "dirichlet_timed";
    case BoundaryKind::reflect_symmetry: return "reflect_symmetry";
  }
  return "?";
}

SolverKind solver_from(const std::string& name) {
  if (name == "godunov6") return SolverKind::godunov6;
  if (name == "godunovTM") return SolverKind::godunovTM;
  if (name == "kerr_debye") return SolverKind::kerr_debye;
  throw ConfigError("field 'solver': unknown solver '" + name + "'");
}

std::string format_sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

double max_intensity(const CellField& field, const GridGeom& g, const MaterialParams& mat) {
  double best = 0.0;
  const int ny = g.dim == 2 ? g.ny : 1;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      best = std::max(best, E_of_D(field.at(i, j).D, mat).squaredNorm());
  return best;
}

}  // namespace

const char* solver_name(SolverKind s) {
  switch (s) {
    case SolverKind::godunov6: return "godunov6";
    case SolverKind::godunovTM: return "godunovTM";
    case SolverKind::kerr_debye: return "kerr_debye";
  }
  return "?";
}

void ScenarioConfig::validate() const {
  if (dimension != 1 && dimension != 2) throw ConfigError("field 'dimension': must be 1 or 2");
  if (cells_x <= 0) throw ConfigError("field 'grid.cells[0]': must be positive");
  if (dimension == 2 && cells_y <= 0) throw ConfigError("field 'grid.cells[1]': must be positive");
  if (!(eps_r > 0.0)) throw ConfigError("field 'material.eps_r_m2_per_v2': must be positive");
  if (!(end_time_s >= 0.0)) throw ConfigError("field 'end_time_s': must be nonnegative");
  if (initial_kind == InitialKind::quadrant && dimension != 2)
    throw ConfigError("field 'initial.type': quadrant data requires dimension 2");
  try {
    scheme.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("field 'scheme': ") + e.what());
  }
  const bool has_dirichlet =
      std::any_of(scheme.boundary.begin(), scheme.boundary.end(),
                  [](BoundaryKind k) { return k == BoundaryKind::dirichlet_timed; });
  if (has_dirichlet && !scheme.pulse)
    throw ConfigError("field 'scheme.pulse': required by dirichlet_timed boundaries");
  for (const auto& u : {riemann_left, riemann_right})
    if (!u.allFinite()) throw ConfigError("field 'initial': non-finite state");
  if (solver == SolverKind::godunovTM) {
    if (!is_tm(riemann_left) || !is_tm(riemann_right))
      throw ConfigError("field 'solver': godunovTM requires TM initial data");
  }
}

std::string ScenarioConfig::to_json_string() const {
  const double mu0 = MaterialParams::vacuum_kerr(eps_r).mu0;
  json j;
  j["name"] = name;
  j["dimension"] = dimension;
  j["material"]["eps_r_m2_per_v2"] = eps_r;
  switch (initial_kind) {
    case InitialKind::riemann:
      j["initial"]["type"] = "riemann";
      j["initial"]["left"] = state_to_json(riemann_left, mu0);
      j["initial"]["right"] = state_to_json(riemann_right, mu0);
      break;
    case InitialKind::quadrant: {
      j["initial"]["type"] = "quadrant";
      const char* names[4] = {"top_left", "top_right", "bottom_right", "bottom_left"};
      for (int q = 0; q < 4; ++q)
        j["initial"][names[q]] = state_to_json(quadrant_states[q], mu0);
      break;
    }
    case InitialKind::zero:
      j["initial"]["type"] = "zero";
      break;
  }
  j["grid"]["cells"] = dimension == 1 ? json::array({cells_x}) : json::array({cells_x, cells_y});
  if (std::isfinite(x_min_m)) {
    j["grid"]["x_min_m"] = x_min_m;
    j["grid"]["x_max_m"] = x_max_m;
  }
  if (dimension == 2 && std::isfinite(y_min_m)) {
    j["grid"]["y_min_m"] = y_min_m;
    j["grid"]["y_max_m"] = y_max_m;
  }
  j["end_time_s"] = end_time_s;
  j["scheme"]["order"] = scheme.order;
  j["scheme"]["cfl"] = scheme.cfl;
  j["scheme"]["limiter"] = "minmod";
  j["scheme"]["boundary"]["x_min"] = boundary_name(scheme.boundary[0]);
  j["scheme"]["boundary"]["x_max"] = boundary_name(scheme.boundary[1]);
  if (dimension == 2) {
    j["scheme"]["boundary"]["y_min"] = boundary_name(scheme.boundary[2]);
    j["scheme"]["boundary"]["y_max"] = boundary_name(scheme.boundary[3]);
  }
  if (scheme.pulse) {
    j["scheme"]["pulse"]["b0_tesla"] = scheme.pulse->b0_tesla;
    j["scheme"]["pulse"]["period_s"] = scheme.pulse->period_s;
    j["scheme"]["pulse"]["waist_m"] = scheme.pulse->waist_m;
  }
  j["solver"] = solver_name(solver);
  j["outputs"]["snapshot_times_s"] = snapshot_times_s;
  j["outputs"]["exact_overlay"] = exact_overlay;
  j["outputs"]["intensity_history"] = intensity_history;
  j["outputs"]["divergence_history"] = divergence_history;
  return j.dump(2);
}

ScenarioConfig ScenarioConfig::from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  ScenarioConfig cfg;
  cfg.name = j.value("name", "unnamed");
  cfg.dimension = require(j, "dimension", "").get<int>();
  if (j.contains("material"))
    cfg.eps_r = j["material"].value("eps_r_m2_per_v2", cfg.eps_r);
  const double mu0 = MaterialParams::vacuum_kerr(std::max(cfg.eps_r, 1e-300)).mu0;

  const json& ini = require(j, "initial", "");
  const std::string kind = require(ini, "type", "initial.").get<std::string>();
  if (kind == "riemann") {
    cfg.initial_kind = InitialKind::riemann;
    cfg.riemann_left = state_from(require(ini, "left", "initial."), mu0, "initial.left");
    cfg.riemann_right = state_from(require(ini, "right", "initial."), mu0, "initial.right");
  } else if (kind == "quadrant") {
    cfg.initial_kind = InitialKind::quadrant;
    const char* names[4] = {"top_left", "top_right", "bottom_right", "bottom_left"};
    for (int q = 0; q < 4; ++q)
      cfg.quadrant_states[q] =
          state_from(require(ini, names[q], "initial."), mu0, std::string("initial.") + names[q]);
  } else if (kind == "zero") {
    cfg.initial_kind = InitialKind::zero;
  } else {
    throw ConfigError("field 'initial.type': unknown kind '" + kind + "'");
  }

  const json& grid = require(j, "grid", "");
  const json& cells = require(grid, "cells", "grid.");
  if (!cells.is_array() || cells.empty())
    throw ConfigError("field 'grid.cells': must be a nonempty array");
  cfg.cells_x = cells[0].get<int>();
  if (cells.size() > 1) cfg.cells_y = cells[1].get<int>();
  cfg.x_min_m = grid.value("x_min_m", std::nan(""));
  cfg.x_max_m = grid.value("x_max_m", std::nan(""));
  cfg.y_min_m = grid.value("y_min_m", std::nan(""));
  cfg.y_max_m = grid.value("y_max_m", std::nan(""));

  cfg.end_time_s = require(j, "end_time_s", "").get<double>();

  if (j.contains("scheme")) {
    const json& s = j["scheme"];
    cfg.scheme.order = s.value("order", 2);
    cfg.scheme.cfl = s.value("cfl", 0.3);
    if (s.contains("limiter") && s["limiter"] != "minmod")
      throw ConfigError("field 'scheme.limiter': only 'minmod' is supported");
    if (s.contains("boundary")) {
      const json& b = s["boundary"];
      const char* sides[4] = {"x_min", "x_max", "y_min", "y_max"};
      for (int k = 0; k < 4; ++k)
        if (b.contains(sides[k]))
          cfg.scheme.boundary[k] =
              boundary_from(b[sides[k]].get<std::string>(), std::string("scheme.boundary.") + sides[k]);
    }
    if (s.contains("pulse")) {
      PulseSpec p;
      p.b0_tesla = require(s["pulse"], "b0_tesla", "scheme.pulse.").get<double>();
      p.period_s = require(s["pulse"], "period_s", "scheme.pulse.").get<double>();
      p.waist_m = require(s["pulse"], "waist_m", "scheme.pulse.").get<double>();
      cfg.scheme.pulse = p;
    }
  }
  if (j.contains("solver")) cfg.solver = solver_from(j["solver"].get<std::string>());
  if (j.contains("outputs")) {
    const json& o = j["outputs"];
    if (o.contains("snapshot_times_s"))
      cfg.snapshot_times_s = o["snapshot_times_s"].get<std::vector<double>>();
    cfg.exact_overlay = o.value("exact_overlay", false);
    cfg.intensity_history = o.value("intensity_history", false);
    cfg.divergence_history = o.value("divergence_history", false);
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig ScenarioConfig::from_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return from_json_string(ss.str());
}

ScenarioConfig builtin_riemann1d() {
  ScenarioConfig cfg;
  cfg.name = "riemann1d";
  cfg.dimension = 1;
  cfg.initial_kind = InitialKind::riemann;
  const double mu0 = MaterialParams::vacuum_kerr(cfg.eps_r).mu0;
  cfg.riemann_left = State66(Vec3(0.0, 0.03, 0.0), Vec3(0.0, 0.0, 3.0) / mu0);
  cfg.riemann_right = State66(Vec3(0.03, 0.04, 0.04), Vec3(0.001, 0.0, 3.0) / mu0);
  cfg.cells_x = 400;
  cfg.end_time_s = 1e-14;
  cfg.exact_overlay = true;
  return cfg;
}

ScenarioConfig builtin_contact_family(int m) {
  if (m < 1 || m > 12) throw ConfigError("contact_family: m must be in 1..12");
  ScenarioConfig cfg;
  cfg.name = "contact_family_" + std::to_string(m);
  cfg.dimension = 1;
  cfg.initial_kind = InitialKind::riemann;
  const MaterialParams mat = MaterialParams::vacuum_kerr(cfg.eps_r);
  const double theta = m * M_PI / 12.0;
  // m = 12 is the exactly Transverse Magnetic member of the family; snap the
  // rotation so no round-off-sized D3 leaks in.
  const double ct = (m == 12) ? -1.0 : std::cos(theta);
  const double st = (m == 12) ? 0.0 : std::sin(theta);
  const Vec3 Dm(0.0, 0.03, 0.0);
  const Vec3 Hm = Vec3(0.0, 0.0, 3.0) / mat.mu0;
  const Vec3 Dp(0.0, 0.03 * ct, 0.03 * st);
  const double e = p_of_d(Dp.norm(), mat);
  const double sigma_p = mat.c / std::sqrt(1.0 + mat.eps_r * e * e);
  const Vec3 Hp = Hm + sigma_p * Vec3::UnitX().cross(Dp - Dm);
  cfg.riemann_left = State66(Dm, Hm);
  cfg.riemann_right = State66(Dp, Hp);
  cfg.cells_x = 400;
  cfg.end_time_s = 1e-14;
  cfg.exact_overlay = true;
  return cfg;
}

ScenarioConfig builtin_quadrant2d() {
  ScenarioConfig cfg;
  cfg.name = "quadrant2d";
  cfg.dimension = 2;
  cfg.initial_kind = InitialKind::quadrant;
  const MaterialParams mat = MaterialParams::vacuum_kerr(cfg.eps_r);
  const double dm = 0.03, dp = 0.04;
  // H3 offsets chosen so that top-left/top-right are joined by a single Lax
  // 5-shock and bottom-left/bottom-right by a single 2-rarefaction.
  const double h3_shock = S_of(dp, dm, dm, mat);
  const double h3_rare = -R_of(dm, dp, dp, mat);
  cfg.quadrant_states[0] = from_tm(StateTM{dm, dm, 0.0});       // top-left
  cfg.quadrant_states[1] = from_tm(StateTM{dm, dp, h3_shock});  // top-right
  cfg.quadrant_states[2] = from_tm(StateTM{dp, dp, h3_rare});   // bottom-right
  cfg.quadrant_states[3] = from_tm(StateTM{dp, dm, 0.0});       // bottom-left
  cfg.cells_x = 400;
  cfg.cells_y = 400;
  cfg.end_time_s = 1e-14;
  cfg.divergence_history = true;
  return cfg;
}

ScenarioConfig builtin_pulse2d() {
  ScenarioConfig cfg;
  cfg.name = "pulse2d";
  cfg.dimension = 2;
  cfg.initial_kind = InitialKind::zero;
  cfg.cells_x = 168;
  cfg.cells_y = 94;
  cfg.x_min_m = 0.0;
  cfg.x_max_m = 45e-6;
  cfg.y_min_m = 0.0;
  cfg.y_max_m = 25e-6;
  cfg.end_time_s = 145e-15;
  cfg.scheme.boundary = {BoundaryKind::dirichlet_timed, BoundaryKind::outflow,
                         BoundaryKind::reflect_symmetry, BoundaryKind::outflow};
  cfg.scheme.pulse = PulseSpec{6.087, 20e-15, 10e-6};
  cfg.intensity_history = true;
  return cfg;
}

std::optional<ScenarioConfig> builtin_by_name(const std::string& name) {
  if (name == "riemann1d") return builtin_riemann1d();
  if (name == "quadrant2d") return builtin_quadrant2d();
  if (name == "pulse2d") return builtin_pulse2d();
  const std::string prefix = "contact_family_";
  if (name.rfind(prefix, 0) == 0) {
    const int m = std::atoi(name.c_str() + prefix.size());
    if (m >= 1 && m <= 12) return builtin_contact_family(m);
  }
  return std::nullopt;
}

ErrorNorms l1_relative_error(const CellField& field, const ExactSampler1D& exact,
                             const Grid1D& grid) {
  double num_d = 0.0, num_h = 0.0, den_d = 0.0, den_h = 0.0;
  for (int i = 0; i < grid.n_cells; ++i) {
    const State66 ue = exact(grid.x_center(i));
    const State66& un = field.at(i);
    for (int k = 0; k < 3; ++k) {
      num_d += std::abs(un.D[k] - ue.D[k]);
      den_d += std::abs(ue.D[k]);
      num_h += std::abs(un.H[k] - ue.H[k]);
      den_h += std::abs(ue.H[k]);
    }
  }
  ErrorNorms n;
  n.absolute_fallback = (den_d == 0.0) || (den_h == 0.0);
  const double dx = grid.dx();
  n.err_d = den_d > 0.0 ? num_d / den_d : num_d * dx;
  n.err_h = den_h > 0.0 ? num_h / den_h : num_h * dx;
  n.aggregate = 0.5 * (n.err_d + n.err_h);
  return n;
}

RunResult run_scenario(const ScenarioConfig& config, const std::string& out_dir) {
  config.validate();
  const MaterialParams mat = MaterialParams::vacuum_kerr(config.eps_r);

  // Domain: derive [-cT, cT] per axis unless bounds are given.
  const double span = mat.c * config.end_time_s;
  Grid1D g1;
  Grid2D g2;
  GridGeom gg;
  if (config.dimension == 1) {
    g1.n_cells = config.cells_x;
    g1.x_min = std::isfinite(config.x_min_m) ? config.x_min_m : -span;
    g1.x_max = std::isfinite(config.x_max_m) ? config.x_max_m : span;
    if (!(g1.x_max > g1.x_min)) throw ConfigError("field 'grid': empty x extent");
    gg = geom(g1);
  } else {
    g2.nx = config.cells_x;
    g2.ny = config.cells_y;
    g2.x_min = std::isfinite(config.x_min_m) ? config.x_min_m : -span;
    g2.x_max = std::isfinite(config.x_max_m) ? config.x_max_m : span;
    g2.y_min = std::isfinite(config.y_min_m) ? config.y_min_m : -span;
    g2.y_max = std::isfinite(config.y_max_m) ? config.y_max_m : span;
    if (!(g2.x_max > g2.x_min) || !(g2.y_max > g2.y_min))
      throw ConfigError("field 'grid': empty extent");
    gg = geom(g2);
  }

  CellField field(gg);
  const int ny = gg.dim == 2 ? gg.ny : 1;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < gg.nx; ++i) {
      const double x = gg.x_min + (i + 0.5) * gg.dx;
      const double y = gg.dim == 2 ? gg.y_min + (j + 0.5) * gg.dy : 0.0;
      switch (config.initial_kind) {
        case InitialKind::riemann:
          field.at(i, j) = x < 0.0 ? config.riemann_left : config.riemann_right;
          break;
        case InitialKind::quadrant:
          field.at(i, j) = config.quadrant_states[y > 0.0 ? (x < 0.0 ? 0 : 1)
                                                          : (x < 0.0 ? 3 : 2)];
          break;
        case InitialKind::zero:
          field.at(i, j) = State66{};
          break;
      }
    }
  }

  // Constant time step hitting end_time exactly.
  const double dt_bound = config.scheme.cfl *
                          (gg.dim == 2 ? std::min(gg.dx, gg.dy) : gg.dx) / mat.c;
  const int n_steps = config.end_time_s > 0.0
                          ? static_cast<int>(std::ceil(config.end_time_s / dt_bound - 1e-12))
                          : 0;
  const double dt = n_steps > 0 ? config.end_time_s / n_steps : 0.0;

  RunResult result;
  result.config = config;
  result.grid = gg;
  result.dt = dt;
  result.steps = n_steps;
  result.out_dir = out_dir;

  const bool writing = !out_dir.empty();
  if (writing) std::filesystem::create_directories(out_dir);
  const bool with_chi = config.solver == SolverKind::kerr_debye;

  std::vector<double> snap_times = config.snapshot_times_s;
  std::sort(snap_times.begin(), snap_times.end());
  size_t next_snap = 0;

  const auto record = [&](double t) {
    if (config.intensity_history) result.intensity.emplace_back(t, max_intensity(field, gg, mat));
    if (config.divergence_history && gg.dim == 2) {
      const auto r = divergence_ratio(field, g2);
      if (r) result.divergence.emplace_back(t, *r);
    }
  };
  record(0.0);

  const auto step_once = [&](double t) {
    switch (config.solver) {
      case SolverKind::godunov6:
        field = advance(field, gg, config.scheme, mat, t, dt, RiemannSolverKind::six);
        break;
      case SolverKind::godunovTM:
        field = advance(field, gg, config.scheme, mat, t, dt, RiemannSolverKind::tm);
        break;
      case SolverKind::kerr_debye:
        field = kd_advance(field, gg, config.scheme, mat, t, dt);
        break;
    }
  };

  int steps_done = 0;
  std::string failure;
  try {
    for (int k = 0; k < n_steps; ++k) {
      step_once(k * dt);
      ++steps_done;
      const double t = (k + 1) * dt;
      record(t);
      while (writing && next_snap < snap_times.size() && t >= snap_times[next_snap] - 1e-30) {
        write_snapshot_csv(out_dir + "/snap_" + std::to_string(next_snap) + ".csv", field, gg,
                           with_chi, mat);
        ++next_snap;
      }
    }
  } catch (const BlowupError& e) {
    result.blew_up = true;
    failure = e.what();
  } catch (const std::runtime_error& e) {
    // Solver breakdown mid-run (typically driven by runaway states): report
    // like a blow-up, keeping the last good snapshot.
    result.blew_up = true;
    failure = e.what();
  }

  // Exact-solution overlays for 1D Riemann data.
  if (!result.blew_up && config.exact_overlay && config.dimension == 1 &&
      config.initial_kind == InitialKind::riemann && config.end_time_s > 0.0) {
    const double T = config.end_time_s;
    const WaveFan66 fan = solve_riemann66(config.riemann_left, config.riemann_right,
                                          Vec3::UnitX(), mat);
    result.norms["exact66"] = l1_relative_error(
        field, [&](double x) { return sample66(fan, x / T, mat); }, g1);
    if (is_tm(config.riemann_left) && is_tm(config.riemann_right)) {
      const WaveFanTM fan_tm = solve_riemann_tm(to_tm(config.riemann_left),
                                                to_tm(config.riemann_right), Vec2::UnitX(), mat);
      result.norms["exactTM"] = l1_relative_error(
          field, [&](double x) { return from_tm(sample_tm(fan_tm, x / T, mat)); }, g1);
    }
  }

  result.final_field = field;

  if (writing) {
    write_snapshot_csv(out_dir + "/final.csv", field, gg, with_chi, mat);
    if (!result.intensity.empty()) {
      std::ofstream os(out_dir + "/intensity.csv");
      os << "t_s,max_e_sq_v2_per_m2\n";
      for (const auto& [t, v] : result.intensity)
        os << format_sci(t) << ',' << format_sci(v) << '\n';
    }
    if (!result.divergence.empty()) {
      std::ofstream os(out_dir + "/divergence.csv");
      os << "t_s,div_ratio\n";
      for (const auto& [t, v] : result.divergence)
        os << format_sci(t) << ',' << format_sci(v) << '\n';
    }
    if (!result.norms.empty()) {
      std::ofstream os(out_dir + "/norms.csv");
      os << "reference,err_d,err_h,aggregate,absolute_fallback\n";
      for (const auto& [key, n] : result.norms)
        os << key << ',' << format_sci(n.err_d) << ',' << format_sci(n.err_h) << ','
           << format_sci(n.aggregate) << ',' << (n.absolute_fallback ? 1 : 0) << '\n';
    }
    json meta;
    meta["config"] = json::parse(config.to_json_string());
    meta["build_id"] = KERR_BUILD_ID;
    meta["dt_s"] = dt;
    meta["n_steps"] = n_steps;
    meta["steps_completed"] = steps_done;
    meta["blew_up"] = result.blew_up;
    if (!failure.empty()) meta["failure"] = failure;
    meta["cfl_dt_bound_s"] = dt_bound;
    meta["derived_domain"] = !std::isfinite(config.x_min_m);
    if (config.initial_kind == InitialKind::riemann) {
      meta["initial_echo"]["left"] = state_echo_json(config.riemann_left, mat.mu0);
      meta["initial_echo"]["right"] = state_echo_json(config.riemann_right, mat.mu0);
    }
    if (config.initial_kind == InitialKind::quadrant) {
      const char* names[4] = {"top_left", "top_right", "bottom_right", "bottom_left"};
      for (int q = 0; q < 4; ++q)
        meta["initial_echo"][names[q]] = state_echo_json(config.quadrant_states[q], mat.mu0);
    }
    std::ofstream os(out_dir + "/metadata.json");
    os << meta.dump(2) << '\n';
  }
  return result;
}

ConvergenceResult convergence_study(const ScenarioConfig& base, const std::vector<int>& cells,
                                    const std::string& out_dir) {
  if (cells.size() < 2) throw ConfigError("convergence_study: need at least 2 cell counts");
  ConvergenceResult res;
  for (int n : cells) {
    ScenarioConfig cfg = base;
    cfg.cells_x = n;
    cfg.exact_overlay = true;
    const std::string run_dir =
        out_dir.empty() ? "" : out_dir + "/n" + std::to_string(n);
    const RunResult run = run_scenario(cfg, run_dir);
    if (!run.norms.count("exact66"))
      throw ConfigError("convergence_study: scenario has no exact overlay");
    ConvergenceRow row;
    row.cells = n;
    row.dx = run.grid.dx;
    row.norms = run.norms.at("exact66");
    res.rows.push_back(row);
  }
  // Least-squares slope of log(err) vs log(dx).
  const auto fit = [&](auto pick) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& r : res.rows) {
      const double e = pick(r.norms);
      if (!(e > 0.0)) return std::nan("");
      const double lx = std::log(r.dx), ly = std::log(e);
      sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
      ++m;
    }
    const double denom = m * sxx - sx * sx;
    return denom != 0.0 ? (m * sxy - sx * sy) / denom : std::nan("");
  };
  res.order_d = fit([](const ErrorNorms& n) { return n.err_d; });
  res.order_h = fit([](const ErrorNorms& n) { return n.err_h; });
  res.order_aggregate = fit([](const ErrorNorms& n) { return n.aggregate; });
  res.order_defined = std::isfinite(res.order_aggregate);

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream os(out_dir + "/convergence.csv");
    os << "cells,dx_m,err_d,err_h,aggregate\n";
    for (const auto& r : res.rows)
      os << r.cells << ',' << format_sci(r.dx) << ',' << format_sci(r.norms.err_d) << ','
         << format_sci(r.norms.err_h) << ',' << format_sci(r.norms.aggregate) << '\n';
    os << "# observed_order_d=" << res.order_d << " order_h=" << res.order_h
       << " order_aggregate=" << res.order_aggregate << '\n';
  }
  return res;
}

CompareReport compare_fields(const CellField& a, const CellField& b, const GridGeom& g) {
  if (a.nx() != b.nx() || a.ny() != b.ny() || a.dim() != b.dim())
    throw std::invalid_argument("compare_fields: grid mismatch");
  CompareReport rep;
  std::array<double, 6> norm_a{};
  const int ny = g.dim == 2 ? g.ny : 1;
  const double n_cells = static_cast<double>(g.nx) * ny;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      for (int k = 0; k < 6; ++k) {
        const double va = a.at(i, j).component(k);
        const double vb = b.at(i, j).component(k);
        rep.l1[k] += std::abs(va - vb) / n_cells;
        rep.linf[k] = std::max(rep.linf[k], std::abs(va - vb));
        norm_a[k] += std::abs(va) / n_cells;
      }
    }
  }
  double num_d = 0, den_d = 0, num_h = 0, den_h = 0;
  for (int k = 0; k < 3; ++k) {
    num_d += rep.l1[k];
    den_d += norm_a[k];
    num_h += rep.l1[k + 3];
    den_h += norm_a[k + 3];
  }
  for (int k = 0; k < 6; ++k) rep.l1_total += rep.l1[k];
  rep.l1_rel_d = den_d > 0.0 ? num_d / den_d : 0.0;
  rep.l1_rel_h = den_h > 0.0 ? num_h / den_h : 0.0;
  return rep;
}

namespace {

struct SnapshotData {
  int n_coord_cols = 1;
  std::vector<std::array<double, 8>> rows;  // coords + 6 components
};

SnapshotData read_snapshot_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("compare_runs: cannot open " + path);
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("compare_runs: empty file " + path);
  SnapshotData data;
  data.n_coord_cols = line.rfind("x,y,", 0) == 0 ? 2 : 1;
  while (std::getline(is, line)) {
    std::array<double, 8> row{};
    std::stringstream ss(line);
    std::string tok;
    int k = 0;
    while (std::getline(ss, tok, ',') && k < 8) row[k++] = std::stod(tok);
    data.rows.push_back(row);
  }
  return data;
}

}  // namespace

CompareReport compare_runs(const std::string& dir_a, const std::string& dir_b) {
  const SnapshotData a = read_snapshot_csv(dir_a + "/final.csv");
  const SnapshotData b = read_snapshot_csv(dir_b + "/final.csv");
  if (a.n_coord_cols != b.n_coord_cols || a.rows.size() != b.rows.size())
    throw std::runtime_error("compare_runs: grid mismatch");
  CompareReport rep;
  std::array<double, 6> norm_a{};
  const double n_cells = static_cast<double>(a.rows.size());
  for (size_t r = 0; r < a.rows.size(); ++r) {
    for (int c = 0; c < a.n_coord_cols; ++c) {
      const double scale = std::abs(a.rows[r][c]) + std::abs(b.rows[r][c]) + 1e-300;
      if (std::abs(a.rows[r][c] - b.rows[r][c]) > 1e-9 * scale)
        throw std::runtime_error("compare_runs: grid mismatch (cell coordinates differ)");
    }
    for (int k = 0; k < 6; ++k) {
      const double va = a.rows[r][a.n_coord_cols + k];
      const double vb = b.rows[r][b.n_coord_cols + k];
      rep.l1[k] += std::abs(va - vb) / n_cells;
      rep.linf[k] = std::max(rep.linf[k], std::abs(va - vb));
      norm_a[k] += std::abs(va) / n_cells;
    }
  }
  double num_d = 0, den_d = 0, num_h = 0, den_h = 0;
  for (int k = 0; k < 3; ++k) {
    num_d += rep.l1[k];
    den_d += norm_a[k];
    num_h += rep.l1[k + 3];
    den_h += norm_a[k + 3];
  }
  for (int k = 0; k < 6; ++k) rep.l1_total += rep.l1[k];
  rep.l1_rel_d = den_d > 0.0 ? num_d / den_d : 0.0;
  rep.l1_rel_h = den_h > 0.0 ? num_h / den_h : 0.0;
  return rep;
}

}  // namespace kerr
