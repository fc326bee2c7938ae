#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "kerr/constitutive.hpp"
#include "kerr/fv.hpp"
#include "kerr/riemann66.hpp"

using namespace kerr;

namespace {
const MaterialParams mat = MaterialParams::vacuum_kerr(2e-18);

double rel(double a, double b) { return std::abs(a - b) / (std::abs(b) + 1e-300); }

State66 data1d_left() { return State66(Vec3(0.0, 0.03, 0.0), Vec3(0.0, 0.0, 3.0) / mat.mu0); }
State66 data1d_right() {
  return State66(Vec3(0.03, 0.04, 0.04), Vec3(0.001, 0.0, 3.0) / mat.mu0);
}
}  // namespace

TEST_CASE("kerr_flux") {
  CHECK(kerr_flux(State66{}, Vec3::UnitX(), mat).maxAbs() == 0.0);

  // componentwise form in the x direction, matching the 1D scheme stencil:
  // D-flux = (0, H3, -H2), H-flux = mu0^{-1} (0, -E3, E2)
  const State66 u(Vec3(0.011, 0.03, -0.02), Vec3(0.5, -1.2, 2.0) / mat.mu0);
  const Flux66 f = kerr_flux(u, Vec3::UnitX(), mat);
  const Vec3 E = E_of_D(u.D, mat);
  CHECK(f.D[0] == 0.0);
  CHECK(rel(f.D[1], u.H[2]) < 1e-14);
  CHECK(rel(f.D[2], -u.H[1]) < 1e-14);
  CHECK(f.H[0] == 0.0);
  CHECK(rel(f.H[1], -E[2] / mat.mu0) < 1e-14);
  CHECK(rel(f.H[2], E[1] / mat.mu0) < 1e-14);

  // antisymmetry in omega
  const Vec3 w = Vec3(0.3, -0.8, 0.5).normalized();
  const Flux66 fp = kerr_flux(u, w, mat);
  const Flux66 fm = kerr_flux(u, -w, mat);
  CHECK((fp.D + fm.D).norm() == 0.0);
  CHECK((fp.H + fm.H).norm() == 0.0);
}

TEST_CASE("godunov_flux") {
  SUBCASE("consistency") {
    const State66 u(Vec3(0.01, -0.02, 0.04), Vec3(1.0, 0.3, -2.0) / mat.mu0);
    const Vec3 w = Vec3(0.1, 0.9, 0.0).normalized();
    const Flux66 a = godunov_flux(u, u, w, mat, RiemannSolverKind::six);
    const Flux66 b = kerr_flux(u, w, mat);
    CHECK((a.D - b.D).norm() <= 1e-12 * (b.maxAbs() + 1e-300));
    CHECK((a.H - b.H).norm() <= 1e-12 * (b.maxAbs() + 1e-300));
  }
  SUBCASE("conservation symmetry") {
    const Flux66 a = godunov_flux(data1d_left(), data1d_right(), Vec3::UnitX(), mat,
                                  RiemannSolverKind::six);
    const Flux66 b = godunov_flux(data1d_right(), data1d_left(), -Vec3::UnitX(), mat,
                                  RiemannSolverKind::six);
    const double scale = a.maxAbs() + b.maxAbs();
    CHECK((a.D + b.D).norm() <= 1e-10 * scale);
    CHECK((a.H + b.H).norm() <= 1e-10 * scale);
  }
  SUBCASE("golden flux for the 1D reference pair") {
    const Flux66 f = godunov_flux(data1d_left(), data1d_right(), Vec3::UnitX(), mat,
                                  RiemannSolverKind::six);
    CHECK(f.D[0] == 0.0);
    CHECK(rel(f.D[1], 2.63561085482169874e+06) < 1e-11);
    CHECK(rel(f.D[2], -2.45469000828258879e+06) < 1e-11);
    CHECK(rel(f.H[1], -4.00595248135792875e+14) < 1e-11);
    CHECK(rel(f.H[2], 7.77721289118962750e+14) < 1e-11);
    // continuity bracket: sampling just left/right of the interface
    const auto fan = solve_riemann66(data1d_left(), data1d_right(), Vec3::UnitX(), mat);
    for (double xi : {-1e-6 * mat.c, 1e-6 * mat.c}) {
      const Flux66 g = kerr_flux(sample66(fan, xi, mat), Vec3::UnitX(), mat);
      CHECK((g.D - f.D).norm() <= 1e-9 * f.maxAbs());
      CHECK((g.H - f.H).norm() <= 1e-9 * f.maxAbs());
    }
  }
  SUBCASE("TM solver path rejects non-TM input") {
    CHECK_THROWS_AS(godunov_flux(data1d_left(), data1d_right(), Vec3::UnitX(), mat,
                                 RiemannSolverKind::tm),
                    std::invalid_argument);
  }
}

TEST_CASE("reconstruct_minmod") {
  CHECK(reconstruct_minmod(0.0, 1.0, 2.0) == 1.0);
  CHECK(reconstruct_minmod(0.0, 1.0, 0.0) == 0.0);
  CHECK(reconstruct_minmod(0.0, 1.0, 3.0) == 1.0);
  CHECK(reconstruct_minmod(3.0, 1.0, 0.0) == -1.0);
}

TEST_CASE("advance: constant field is unchanged") {
  Grid1D g{64, -1e-6, 1e-6};
  CellField field(g);
  const State66 u(Vec3(0.02, -0.01, 0.03), Vec3(0.7, 0.1, -0.4) / mat.mu0);
  for (int i = 0; i < g.n_cells; ++i) field.at(i) = u;
  SchemeOptions opts;
  const double dt = opts.cfl * g.dx() / mat.c;
  const CellField out = advance(field, geom(g), opts, mat, 0.0, dt);
  for (int i = 0; i < g.n_cells; ++i) {
    CHECK((out.at(i).D - u.D).norm() == 0.0);
    CHECK((out.at(i).H - u.H).norm() == 0.0);
  }
}

TEST_CASE("advance: single first-order step equals the hand-rolled update") {
  Grid1D g{16, -1e-6, 1e-6};
  CellField field(g);
  for (int i = 0; i < g.n_cells; ++i)
    field.at(i) = g.x_center(i) < 0.0 ? data1d_left() : data1d_right();
  SchemeOptions opts;
  opts.order = 1;
  const double dt = opts.cfl * g.dx() / mat.c;
  const CellField out = advance(field, geom(g), opts, mat, 0.0, dt, RiemannSolverKind::six);

  // Reference: interface states from the sampled fans, then the componentwise
  // stencil of the 1D scheme.
  const double r = dt / g.dx();
  for (int i = 0; i < g.n_cells; ++i) {
    const State66& um = i > 0 ? field.at(i - 1) : field.at(0);
    const State66& u0 = field.at(i);
    const State66& up = i + 1 < g.n_cells ? field.at(i + 1) : field.at(g.n_cells - 1);
    const State66 wl = sample66(solve_riemann66(um, u0, Vec3::UnitX(), mat), 0.0, mat);
    const State66 wr = sample66(solve_riemann66(u0, up, Vec3::UnitX(), mat), 0.0, mat);
    const Vec3 El = E_of_D(wl.D, mat), Er = E_of_D(wr.D, mat);
    State66 ref = u0;
    ref.D[1] -= r * (wr.H[2] - wl.H[2]);
    ref.D[2] -= r * (-wr.H[1] + wl.H[1]);
    ref.H[1] -= r / mat.mu0 * (-Er[2] + El[2]);
    ref.H[2] -= r / mat.mu0 * (Er[1] - El[1]);
    const double scale = ref.maxAbs() + 1e-300;
    CHECK((out.at(i).D - ref.D).norm() <= 1e-13 * scale);
    CHECK((out.at(i).H - ref.H).norm() <= 1e-13 * scale);
  }
}

TEST_CASE("advance: linear-regime plane wave propagates at c") {
  const MaterialParams lin = MaterialParams::make(mat.eps0, mat.mu0, 1e-30);
  const double L = 2e-6;
  const double T = 0.5 * L / lin.c;
  const double A = 0.02, sigma = L / 8.0;
  const auto exact_d2 = [&](double x, double t) {
    const double s = x - lin.c * t;
    return A * std::exp(-s * s / (sigma * sigma));
  };
  const auto run = [&](int n, int order) {
    Grid1D g{n, -L, L};
    CellField field(g);
    for (int i = 0; i < n; ++i) {
      const double d2 = exact_d2(g.x_center(i), 0.0);
      field.at(i) = State66(Vec3(0.0, d2, 0.0), Vec3(0.0, 0.0, lin.c * d2));
    }
    SchemeOptions opts;
    opts.order = order;
    const int steps = static_cast<int>(std::ceil(T / (opts.cfl * g.dx() / lin.c)));
    const double dt = T / steps;
    for (int k = 0; k < steps; ++k)
      field = advance(field, geom(g), opts, lin, k * dt, dt, RiemannSolverKind::six);
    double err = 0.0, norm = 0.0;
    for (int i = 0; i < n; ++i) {
      err += std::abs(field.at(i).D[1] - exact_d2(g.x_center(i), T));
      norm += std::abs(exact_d2(g.x_center(i), T));
    }
    return err / norm;
  };
  const double e1a = run(100, 1);
  const double e1b = run(200, 1);
  const double e2a = run(100, 2);
  CHECK(e1b < e1a);
  CHECK(e1a / e1b > 1.5);  // roughly first order
  CHECK(e2a < 0.5 * e1a);  // second order beats first on the same grid
}

TEST_CASE("advance: exact conservation on a compact bump") {
  Grid1D g{80, -1e-6, 1e-6};
  CellField field(g);
  for (int i = 0; i < g.n_cells; ++i) {
    const double x = g.x_center(i) / 2e-7;
    // exact compact support: the boundary fluxes stay identically zero
    const double bump = std::abs(x) < 2.5 ? std::exp(-x * x) - std::exp(-2.5 * 2.5) : 0.0;
    field.at(i) = State66(Vec3(0.0, 0.02 * bump, 0.01 * bump),
                          Vec3(0.0, 0.4 * bump, 0.8 * bump) / mat.mu0);
  }
  SchemeOptions opts;
  const double dt = opts.cfl * g.dx() / mat.c;
  State66 before{};
  for (int i = 0; i < g.n_cells; ++i) before += field.at(i);
  CellField out = field;
  for (int k = 0; k < 10; ++k) out = advance(out, geom(g), opts, mat, k * dt, dt);
  State66 after{};
  for (int i = 0; i < g.n_cells; ++i) after += out.at(i);
  // zero background: boundary fluxes vanish, so totals are conserved
  CHECK((after.D - before.D).norm() <= 1e-12 * before.D.norm());
  CHECK((after.H - before.H).norm() <= 1e-12 * before.H.norm());
}

TEST_CASE("advance: D1 and H1 columns are exactly preserved in 1D") {
  Grid1D g{64, -1e-6, 1e-6};
  CellField field(g);
  for (int i = 0; i < g.n_cells; ++i)
    field.at(i) = g.x_center(i) < 0.0 ? data1d_left() : data1d_right();
  SchemeOptions opts;
  const double dt = opts.cfl * g.dx() / mat.c;
  CellField out = field;
  for (int k = 0; k < 20; ++k) out = advance(out, geom(g), opts, mat, k * dt, dt);
  for (int i = 0; i < g.n_cells; ++i) {
    CHECK(out.at(i).D[0] == field.at(i).D[0]);
    CHECK(out.at(i).H[0] == field.at(i).H[0]);
  }
}

TEST_CASE("advance: guards") {
  Grid1D g{8, 0.0, 1e-6};
  CellField field(g);
  SchemeOptions opts;
  const double dt_ok = opts.cfl * g.dx() / mat.c;
  CHECK_THROWS_AS(advance(field, geom(g), opts, mat, 0.0, 2.0 * dt_ok), std::invalid_argument);

  field.at(3).D[1] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(advance(field, geom(g), opts, mat, 0.0, dt_ok), BlowupError);
}

TEST_CASE("fill_ghosts") {
  Grid2D g{4, 3, 0.0, 4.0, 0.0, 3.0};
  CellField field(g);
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      field.at(i, j) =
          State66(Vec3(u(rng), u(rng), u(rng)), Vec3(u(rng), u(rng), u(rng)));

  SUBCASE("outflow copies the edge cell") {
    SchemeOptions opts;
    fill_ghosts(field, geom(g), opts, mat, 0.0);
    for (int j = 0; j < g.ny; ++j) {
      CHECK((field.at(-1, j).D - field.at(0, j).D).norm() == 0.0);
      CHECK((field.at(-2, j).D - field.at(0, j).D).norm() == 0.0);
      CHECK((field.at(g.nx, j).H - field.at(g.nx - 1, j).H).norm() == 0.0);
    }
  }
  SUBCASE("reflect_symmetry mirrors with the pulse-test parity") {
    SchemeOptions opts;
    opts.boundary[static_cast<int>(Side::y_min)] = BoundaryKind::reflect_symmetry;
    fill_ghosts(field, geom(g), opts, mat, 0.0);
    for (int i = 0; i < g.nx; ++i) {
      for (int gi = 1; gi <= 2; ++gi) {
        const State66& mirror = field.at(i, gi - 1);
        const State66& ghost = field.at(i, -gi);
        CHECK(ghost.D[0] == -mirror.D[0]);
        CHECK(ghost.D[1] == mirror.D[1]);
        CHECK(ghost.D[2] == -mirror.D[2]);
        CHECK(ghost.H[0] == mirror.H[0]);
        CHECK(ghost.H[1] == -mirror.H[1]);
        CHECK(ghost.H[2] == mirror.H[2]);
      }
    }
  }
  SUBCASE("dirichlet_timed imposes the pulse H3") {
    SchemeOptions opts;
    opts.boundary[static_cast<int>(Side::x_min)] = BoundaryKind::dirichlet_timed;
    opts.pulse = PulseSpec{6.087, 20e-15, 10e-6};
    const double t = 5e-15;
    fill_ghosts(field, geom(g), opts, mat, t);
    for (int j = 0; j < g.ny; ++j) {
      const double y = g.y_center(j);
      const double expect = 6.087 / mat.mu0 * (1.0 - std::cos(2.0 * M_PI * t / 20e-15)) *
                            std::exp(-y * y / (10e-6 * 10e-6));
      CHECK(rel(field.at(-1, j).H[2], expect) < 1e-14);
      CHECK(field.at(-1, j).D[1] == field.at(0, j).D[1]);
    }
    // after the pulse window the source is off
    fill_ghosts(field, geom(g), opts, mat, 21e-15);
    CHECK(field.at(-1, 0).H[2] == 0.0);
  }
}

TEST_CASE("divergence_ratio") {
  SUBCASE("uniform field reports not-applicable") {
    Grid2D g{8, 8, 0.0, 1.0, 0.0, 1.0};
    CellField field(g);
    const State66 u(Vec3(0.01, 0.02, 0.0), Vec3::Zero());
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) field.at(i, j) = u;
    CHECK(!divergence_ratio(field, g).has_value());
  }
  SUBCASE("divergence-free analytic field: small ratio, refining") {
    // psi with distinct wavenumbers so the centered-difference divergence
    // carries a genuine O(dx^2) discretization residual.
    const auto ratio_at = [&](int n) {
      Grid2D g{n, n, 0.0, 1.0, 0.0, 1.0};
      CellField field(g);
      const double kx = 2.0 * M_PI, ky = 4.0 * M_PI;
      for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
          const double x = g.x_center(i), y = g.y_center(j);
          // D = (d psi / dy, -d psi / dx) for psi = sin(kx x) sin(ky y)
          field.at(i, j) = State66(
              Vec3(ky * std::sin(kx * x) * std::cos(ky * y),
                   -kx * std::cos(kx * x) * std::sin(ky * y), 0.0),
              Vec3::Zero());
        }
      }
      return *divergence_ratio(field, g);
    };
    const double r32 = ratio_at(32);
    const double r64 = ratio_at(64);
    CHECK(r32 < 0.05);
    CHECK(r64 < 0.5 * r32);
  }
}

TEST_CASE("snapshot CSV is byte-stable") {
  Grid1D g{8, -1.0, 1.0};
  CellField field(g);
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < g.n_cells; ++i)
    field.at(i) = State66(Vec3(u(rng), u(rng), u(rng)), Vec3(u(rng), u(rng), u(rng)));
  const std::string p1 = "snap_test_a.csv", p2 = "snap_test_b.csv";
  write_snapshot_csv(p1, field, geom(g), false, mat);
  write_snapshot_csv(p2, field, geom(g), false, mat);
  std::ifstream f1(p1), f2(p2);
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  CHECK(s1.str() == s2.str());
  CHECK(s1.str().rfind("x,D1,D2,D3,H1,H2,H3\n", 0) == 0);
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}
