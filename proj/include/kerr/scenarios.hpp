/*! \file scenarios.hpp
 *  \brief Experiment harness: declarative scenario configs, run driver,
 *         error norms, convergence studies and run comparison.
 */

#ifndef KERR_SCENARIOS_HPP
#define KERR_SCENARIOS_HPP

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kerr/fv.hpp"
#include "kerr/material.hpp"
#include "kerr/state.hpp"

namespace kerr {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class InitialKind { riemann, quadrant, zero };
enum class SolverKind { godunov6, godunovTM, kerr_debye };

const char* solver_name(SolverKind s);

/// Declarative description of one experiment. All quantities in SI units;
/// magnetic initial data is specified as mu0 H (Tesla) and stored as H.
struct ScenarioConfig {
  std::string name;
  int dimension = 1;
  double eps_r = 2e-18;

  InitialKind initial_kind = InitialKind::riemann;
  State66 riemann_left, riemann_right;
  // Quadrant states in the order [top-left, top-right, bottom-right, bottom-left].
  std::array<State66, 4> quadrant_states{};

  int cells_x = 400;
  int cells_y = 0;  // 2D only
  // Domain bounds; NaN means "derive": [-cT, cT] per axis for Riemann/quadrant data.
  double x_min_m = std::nan(""), x_max_m = std::nan("");
  double y_min_m = std::nan(""), y_max_m = std::nan("");

  double end_time_s = 1e-14;
  SchemeOptions scheme;
  SolverKind solver = SolverKind::godunov6;

  std::vector<double> snapshot_times_s;
  bool exact_overlay = false;
  bool intensity_history = false;
  bool divergence_history = false;

  void validate() const;
  std::string to_json_string() const;
  static ScenarioConfig from_json_string(const std::string& text);
  static ScenarioConfig from_json_file(const std::string& path);
};

/// Built-in scenarios reproducing the reference experiments.
ScenarioConfig builtin_riemann1d();
ScenarioConfig builtin_contact_family(int m);  // m in 1..12, rotation angle m pi / 12
ScenarioConfig builtin_quadrant2d();
ScenarioConfig builtin_pulse2d();
/// Resolves "riemann1d", "contact_family_<m>", "quadrant2d", "pulse2d".
std::optional<ScenarioConfig> builtin_by_name(const std::string& name);

/// L1-relative errors against an exact sampler, aggregated separately over
/// the D and H component groups.
struct ErrorNorms {
  double err_d = 0.0;
  double err_h = 0.0;
  double aggregate = 0.0;
  bool absolute_fallback = false;  // set when the exact norm vanishes
};
using ExactSampler1D = std::function<State66(double x)>;
ErrorNorms l1_relative_error(const CellField& field, const ExactSampler1D& exact,
                             const Grid1D& grid);

struct RunResult {
  ScenarioConfig config;
  GridGeom grid;
  CellField final_field;
  double dt = 0.0;
  int steps = 0;
  bool blew_up = false;
  std::map<std::string, ErrorNorms> norms;  // keys: exact66, exactTM (when available)
  std::vector<std::pair<double, double>> intensity;   // (t, max |E|^2)
  std::vector<std::pair<double, double>> divergence;  // (t, ratio)
  std::string out_dir;
};

/// Runs a scenario; when out_dir is nonempty, writes snapshots, norms and a
/// metadata record there. Blow-up is reported in the result (last good
/// snapshot written), not thrown.
RunResult run_scenario(const ScenarioConfig& config, const std::string& out_dir = "");

struct ConvergenceRow {
  int cells = 0;
  double dx = 0.0;
  ErrorNorms norms;
};
struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  double order_d = 0.0, order_h = 0.0, order_aggregate = 0.0;
  bool order_defined = true;
};
/// Reruns `base` for each cell count and fits the observed order by least
/// squares in log-log coordinates.
ConvergenceResult convergence_study(const ScenarioConfig& base, const std::vector<int>& cells,
                                    const std::string& out_dir = "");

/// Componentwise distances between two snapshot sets.
struct CompareReport {
  std::array<double, 6> l1{};      // integrated |a-b| per component
  std::array<double, 6> linf{};
  double l1_total = 0.0;
  double l1_rel_d = 0.0;  // D-group distance relative to run A's D norm
  double l1_rel_h = 0.0;
};
CompareReport compare_fields(const CellField& a, const CellField& b, const GridGeom& g);
/// Reads final.csv from two run directories (grids must match).
CompareReport compare_runs(const std::string& dir_a, const std::string& dir_b);

}  // namespace kerr

#endif  // KERR_SCENARIOS_HPP
