// Command-line driver: exact Riemann fans, scenario runs, convergence
// studies and run comparison. Exit codes: 0 success, 2 config error,
// 3 runtime blow-up.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "kerr/riemann66.hpp"
#include "kerr/riemann_tm.hpp"
#include "kerr/scenarios.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitBlowup = 3;

kerr::ScenarioConfig load_config(const std::string& spec) {
  if (std::filesystem::exists(spec)) return kerr::ScenarioConfig::from_json_file(spec);
  if (auto builtin = kerr::builtin_by_name(spec)) return *builtin;
  throw kerr::ConfigError("config '" + spec + "' is neither a file nor a builtin scenario "
                          "(builtins: riemann1d, contact_family_<m>, quadrant2d, pulse2d)");
}

std::vector<int> parse_cells(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

void apply_overrides(kerr::ScenarioConfig& cfg, const std::string& cells,
                     const std::string& solver, int order) {
  if (!cells.empty()) {
    const auto ns = parse_cells(cells);
    if (!ns.empty()) cfg.cells_x = ns[0];
    if (ns.size() > 1) cfg.cells_y = ns[1];
  }
  if (!solver.empty()) {
    if (solver == "godunov6") cfg.solver = kerr::SolverKind::godunov6;
    else if (solver == "godunovTM") cfg.solver = kerr::SolverKind::godunovTM;
    else if (solver == "kerr_debye") cfg.solver = kerr::SolverKind::kerr_debye;
    else throw kerr::ConfigError("unknown solver '" + solver + "'");
  }
  if (order != 0) cfg.scheme.order = order;
}

int cmd_riemann(const std::string& config_spec, const std::string& solver, int samples,
                const std::string& out_path) {
  const kerr::ScenarioConfig cfg = load_config(config_spec);
  if (cfg.initial_kind != kerr::InitialKind::riemann)
    throw kerr::ConfigError("the riemann command needs a scenario with riemann initial data");
  const kerr::MaterialParams mat = kerr::MaterialParams::vacuum_kerr(cfg.eps_r);

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot open " + out_path);
    os = &file;
  }

  if (solver == "tm") {
    if (!kerr::is_tm(cfg.riemann_left) || !kerr::is_tm(cfg.riemann_right))
      throw kerr::ConfigError("TM solver requires TM initial data");
    const auto fan = kerr::solve_riemann_tm(kerr::to_tm(cfg.riemann_left),
                                            kerr::to_tm(cfg.riemann_right),
                                            kerr::Vec2::UnitX(), mat);
    kerr::dump_fan_tm_csv(*os, fan);
    if (samples > 0) {
      *os << "\nxi_m_per_s,D1,D2,H3\n";
      char buf[160];
      for (int k = 0; k < samples; ++k) {
        const double xi = -1.05 * mat.c + 2.1 * mat.c * k / (samples - 1);
        const auto u = kerr::sample_tm(fan, xi, mat);
        std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e,%.16e\n", xi, u.D1, u.D2, u.H3);
        *os << buf;
      }
    }
    return 0;
  }

  const auto fan = kerr::solve_riemann66(cfg.riemann_left, cfg.riemann_right,
                                         kerr::Vec3::UnitX(), mat);
  kerr::dump_fan_csv(*os, fan);
  if (samples > 0) {
    *os << "\nxi_m_per_s,D1,D2,D3,H1,H2,H3\n";
    char buf[256];
    for (int k = 0; k < samples; ++k) {
      const double xi = -1.05 * mat.c + 2.1 * mat.c * k / (samples - 1);
      const auto u = kerr::sample66(fan, xi, mat);
      std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e,%.16e,%.16e,%.16e,%.16e\n", xi,
                    u.D[0], u.D[1], u.D[2], u.H[0], u.H[1], u.H[2]);
      *os << buf;
    }
  }
  return 0;
}

int cmd_run(const std::string& config_spec, const std::string& out_dir,
            const std::string& cells, const std::string& solver, int order) {
  kerr::ScenarioConfig cfg = load_config(config_spec);
  apply_overrides(cfg, cells, solver, order);
  const auto result = kerr::run_scenario(cfg, out_dir);
  std::cout << "scenario " << cfg.name << ": " << result.steps << " steps, dt = "
            << result.dt << " s\n";
  for (const auto& [key, n] : result.norms)
    std::cout << "  L1 error vs " << key << ": D " << n.err_d << ", H " << n.err_h << '\n';
  if (result.blew_up) {
    std::cerr << "run blew up (non-finite state); last good snapshot written\n";
    return kExitBlowup;
  }
  return 0;
}

int cmd_converge(const std::string& config_spec, const std::string& out_dir,
                 const std::string& cells, const std::string& solver, int order) {
  kerr::ScenarioConfig cfg = load_config(config_spec);
  apply_overrides(cfg, "", solver, order);
  const auto ns = parse_cells(cells);
  const auto res = kerr::convergence_study(cfg, ns, out_dir);
  std::cout << "cells,dx_m,err_d,err_h,aggregate\n";
  for (const auto& r : res.rows)
    std::cout << r.cells << ',' << r.dx << ',' << r.norms.err_d << ',' << r.norms.err_h
              << ',' << r.norms.aggregate << '\n';
  std::cout << "observed order: D " << res.order_d << ", H " << res.order_h
            << ", aggregate " << res.order_aggregate << '\n';
  return 0;
}

int cmd_compare(const std::string& dir_a, const std::string& dir_b) {
  const auto rep = kerr::compare_runs(dir_a, dir_b);
  const char* names[6] = {"D1", "D2", "D3", "H1", "H2", "H3"};
  std::cout << "component,l1,linf\n";
  for (int k = 0; k < 6; ++k)
    std::cout << names[k] << ',' << rep.l1[k] << ',' << rep.linf[k] << '\n';
  std::cout << "relative L1 distance: D " << rep.l1_rel_d << ", H " << rep.l1_rel_h << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Riemann solvers and Godunov/relaxation schemes for the Kerr system"};
  app.require_subcommand(1);

  std::string config_spec, out, cells, solver;
  int order = 0;
  int samples = 0;
  std::string dir_a, dir_b;

  auto* riemann = app.add_subcommand("riemann", "solve one Riemann problem and dump the fan");
  riemann->add_option("--config", config_spec, "config file or builtin name")->required();
  riemann->add_option("--solver", solver, "six (default) or tm");
  riemann->add_option("--samples", samples, "also emit N sampled states across [-c, c]");
  riemann->add_option("--out", out, "output file (default stdout)");

  auto* run = app.add_subcommand("run", "run a scenario");
  run->add_option("--config", config_spec, "config file or builtin name")->required();
  run->add_option("--out", out, "output directory")->required();
  run->add_option("--cells", cells, "override cell counts N[,M]");
  run->add_option("--solver", solver, "godunov6 | godunovTM | kerr_debye");
  run->add_option("--order", order, "scheme order 1 or 2");

  auto* conv = app.add_subcommand("converge", "convergence study over several grids");
  conv->add_option("--config", config_spec, "config file or builtin name")->required();
  conv->add_option("--cells", cells, "comma-separated cell counts")->required();
  conv->add_option("--out", out, "output directory");
  conv->add_option("--solver", solver, "godunov6 | godunovTM | kerr_debye");
  conv->add_option("--order", order, "scheme order 1 or 2");

  auto* cmp = app.add_subcommand("compare", "compare two run directories");
  cmp->add_option("dir_a", dir_a, "first run directory")->required();
  cmp->add_option("dir_b", dir_b, "second run directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (riemann->parsed())
      return cmd_riemann(config_spec, solver.empty() ? "six" : solver, samples, out);
    if (run->parsed()) return cmd_run(config_spec, out, cells, solver, order);
    if (conv->parsed()) return cmd_converge(config_spec, out, cells, solver, order);
    if (cmp->parsed()) return cmd_compare(dir_a, dir_b);
  } catch (const kerr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const kerr::BlowupError& e) {
    std::cerr << "blow-up: " << e.what() << '\n';
    return kExitBlowup;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
