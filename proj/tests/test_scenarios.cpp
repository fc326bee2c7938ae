#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "kerr/riemann66.hpp"
#include "kerr/scenarios.hpp"
#include "kerr/wavecurves.hpp"

using namespace kerr;

namespace {
const MaterialParams mat = MaterialParams::vacuum_kerr(2e-18);

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name)
      : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string str() const { return path.string(); }
};
}  // namespace

TEST_CASE("config JSON round trip") {
  for (const auto& name : {"riemann1d", "contact_family_6", "quadrant2d", "pulse2d"}) {
    const auto cfg = builtin_by_name(name);
    REQUIRE(cfg.has_value());
    const auto back = ScenarioConfig::from_json_string(cfg->to_json_string());
    CHECK(back.name == cfg->name);
    CHECK(back.dimension == cfg->dimension);
    CHECK(back.cells_x == cfg->cells_x);
    CHECK(back.solver == cfg->solver);
    CHECK(back.scheme.order == cfg->scheme.order);
    CHECK(back.end_time_s == doctest::Approx(cfg->end_time_s).epsilon(1e-15));
    CHECK((back.riemann_left.D - cfg->riemann_left.D).norm() <=
          1e-15 * (cfg->riemann_left.D.norm() + 1e-300));
    CHECK((back.riemann_left.H - cfg->riemann_left.H).norm() <=
          1e-12 * (cfg->riemann_left.H.norm() + 1e-300));
  }
  CHECK(!builtin_by_name("no_such_scenario").has_value());
  CHECK(!builtin_by_name("contact_family_13").has_value());
}

TEST_CASE("config validation reports the offending field") {
  auto cfg = builtin_riemann1d();
  cfg.dimension = 3;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("dimension"), ConfigError);

  cfg = builtin_riemann1d();
  cfg.cells_x = 0;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("cells"), ConfigError);

  cfg = builtin_riemann1d();
  cfg.solver = SolverKind::godunovTM;  // reference data are not TM
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("solver"), ConfigError);

  cfg = builtin_riemann1d();
  cfg.scheme.boundary[0] = BoundaryKind::dirichlet_timed;  // no pulse given
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("pulse"), ConfigError);

  CHECK_THROWS_AS(ScenarioConfig::from_json_string("{ not json"), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_json_string("{\"dimension\": 1}"), ConfigError);
}

TEST_CASE("l1_relative_error") {
  Grid1D g{16, -1.0, 1.0};
  CellField field(g);
  const State66 u(Vec3(0.01, 0.02, 0.0), Vec3(0.0, 0.0, 1.0));
  for (int i = 0; i < g.n_cells; ++i) field.at(i) = u;

  const auto n0 = l1_relative_error(field, [&](double) { return u; }, g);
  CHECK(n0.err_d == 0.0);
  CHECK(n0.err_h == 0.0);
  CHECK(!n0.absolute_fallback);

  // zero-norm exact solution flags the absolute fallback
  const auto nf = l1_relative_error(field, [&](double) { return State66{}; }, g);
  CHECK(nf.absolute_fallback);
  CHECK(nf.err_d > 0.0);
}

TEST_CASE("run_scenario: determinism and artifacts") {
  ScenarioConfig cfg = builtin_riemann1d();
  cfg.cells_x = 64;
  cfg.snapshot_times_s = {0.5e-14};
  TempDir a("kerr_run_a"), b("kerr_run_b");
  const auto ra = run_scenario(cfg, a.str());
  const auto rb = run_scenario(cfg, b.str());
  CHECK(!ra.blew_up);
  CHECK(ra.steps == rb.steps);
  CHECK(slurp(a.str() + "/final.csv") == slurp(b.str() + "/final.csv"));
  CHECK(slurp(a.str() + "/final.csv").rfind("x,D1,", 0) == 0);
  CHECK(std::filesystem::exists(a.path / "snap_0.csv"));
  CHECK(std::filesystem::exists(a.path / "metadata.json"));
  CHECK(std::filesystem::exists(a.path / "norms.csv"));
  const std::string meta = slurp(a.str() + "/metadata.json");
  CHECK(meta.find("\"dt_s\"") != std::string::npos);
  CHECK(meta.find("\"build_id\"") != std::string::npos);
  CHECK(meta.find("mu0_h_tesla") != std::string::npos);
  CHECK(meta.find("h_a_per_m") != std::string::npos);

  const auto rep = compare_runs(a.str(), b.str());
  CHECK(rep.l1_total == 0.0);
}

TEST_CASE("run_scenario: norms computed against both exact references") {
  ScenarioConfig cfg = builtin_contact_family(12);
  cfg.cells_x = 64;
  const auto run = run_scenario(cfg);
  CHECK(run.norms.count("exact66") == 1);
  CHECK(run.norms.count("exactTM") == 1);
  CHECK(run.norms.at("exact66").err_d > 0.0);
}

TEST_CASE("quadrant construction satisfies the stated wave connections") {
  const auto cfg = builtin_quadrant2d();
  // top-left | top-right joined by a single Lax 5-shock along x
  {
    const auto fan = solve_riemann66(cfg.quadrant_states[0], cfg.quadrant_states[1],
                                     Vec3::UnitX(), mat);
    CHECK(fan.waves[3].type == WaveType::shock);
    for (int k : {0, 1, 4}) CHECK(fan.waves[k].type == WaveType::trivial);
    const double sc = cfg.quadrant_states[0].maxAbs();
    CHECK((fan.states[2].D - fan.states[3].D).norm() <= 1e-10 * sc);  // trivial contact
    CHECK(validate_fan(fan, mat).ok);
  }
  // bottom-left | bottom-right joined by a single 2-rarefaction along x
  {
    const auto fan = solve_riemann66(cfg.quadrant_states[3], cfg.quadrant_states[2],
                                     Vec3::UnitX(), mat);
    CHECK(fan.waves[1].type == WaveType::rarefaction);
    for (int k : {0, 3, 4}) CHECK(fan.waves[k].type == WaveType::trivial);
    CHECK(validate_fan(fan, mat).ok);
  }
}

TEST_CASE("compare_runs detects grid mismatch") {
  ScenarioConfig cfg = builtin_riemann1d();
  cfg.cells_x = 32;
  TempDir a("kerr_cmp_a"), b("kerr_cmp_b");
  run_scenario(cfg, a.str());
  cfg.cells_x = 48;
  run_scenario(cfg, b.str());
  CHECK_THROWS(compare_runs(a.str(), b.str()));
}

TEST_CASE("convergence_study") {
  SUBCASE("constant data: zero errors, order undefined") {
    ScenarioConfig cfg = builtin_riemann1d();
    cfg.riemann_right = cfg.riemann_left;
    cfg.cells_x = 16;
    const auto res = convergence_study(cfg, {16, 32});
    for (const auto& r : res.rows) CHECK(r.norms.aggregate == 0.0);
    CHECK(!res.order_defined);
  }
  SUBCASE("riemann1d errors decrease under refinement") {
    const auto res = convergence_study(builtin_riemann1d(), {50, 100});
    REQUIRE(res.rows.size() == 2);
    CHECK(res.rows[1].norms.aggregate < res.rows[0].norms.aggregate);
    CHECK(res.order_defined);
  }
  SUBCASE("requires at least two grids") {
    CHECK_THROWS_AS(convergence_study(builtin_riemann1d(), {64}), ConfigError);
  }
}

TEST_CASE("kerr_debye convergence tracks the Godunov scheme") {
  std::vector<double> err_g, err_k;
  for (int n : {100, 200}) {
    ScenarioConfig cfg = builtin_riemann1d();
    cfg.cells_x = n;
    err_g.push_back(run_scenario(cfg).norms.at("exact66").aggregate);
    cfg.solver = SolverKind::kerr_debye;
    err_k.push_back(run_scenario(cfg).norms.at("exact66").aggregate);
  }
  for (size_t i = 0; i < err_g.size(); ++i) {
    CHECK(err_k[i] < 2.0 * err_g[i]);
    CHECK(err_g[i] < 2.0 * err_k[i]);
  }
  CHECK(err_k[1] < err_k[0]);
}

TEST_CASE("TM solver runs match the 6x6 solver on TM data") {
  ScenarioConfig cfg = builtin_contact_family(12);
  cfg.cells_x = 200;
  const auto r66 = run_scenario(cfg);
  cfg.solver = SolverKind::godunovTM;
  const auto rtm = run_scenario(cfg);
  const auto rep = compare_fields(r66.final_field, rtm.final_field, r66.grid);
  // far below the O(5e-2) discretization error of either run
  CHECK(rep.l1_rel_d < 1e-3);
  CHECK(rep.l1_rel_h < 1e-3);
}

TEST_CASE("blow-up is reported, not thrown") {
  ScenarioConfig cfg = builtin_riemann1d();
  cfg.cells_x = 16;
  cfg.riemann_left.H = Vec3(0.0, 0.0, 1e300);  // overflows the first update
  cfg.riemann_right.H = -cfg.riemann_left.H;
  TempDir dir("kerr_blowup");
  const auto run = run_scenario(cfg, dir.str());
  CHECK(run.blew_up);
  CHECK(std::filesystem::exists(dir.path / "metadata.json"));
  CHECK(slurp(dir.str() + "/metadata.json").find("\"blew_up\": true") != std::string::npos);
}
