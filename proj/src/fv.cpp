#include "kerr/fv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "kerr/constitutive.hpp"
#include "kerr/riemann66.hpp"
#include "kerr/riemann_tm.hpp"

namespace kerr {
namespace {

Vec3 axis_vec(int axis) { return axis == 0 ? Vec3::UnitX() : Vec3::UnitY(); }

// States whose gap is at round-off scale radiate waves of the same size; the
// trivial flux is then exact to round-off and the solve is skipped.
bool nearly_equal_states(const State66& a, const State66& b) {
  const double sd =
      1e-12 * std::max(a.D.cwiseAbs().maxCoeff(), b.D.cwiseAbs().maxCoeff()) + 1e-300;
  const double sh =
      1e-12 * std::max(a.H.cwiseAbs().maxCoeff(), b.H.cwiseAbs().maxCoeff()) + 1e-300;
  return (a.D - b.D).cwiseAbs().maxCoeff() <= sd && (a.H - b.H).cwiseAbs().maxCoeff() <= sh;
}

// Mirror transform across a plane with normal along `axis`, in the symmetry
// class of the pulse test (H3 and the normal D component even).
State66 reflect_state(const State66& u, int axis) {
  if (axis == 0)
    return State66(Vec3(u.D[0], -u.D[1], -u.D[2]), Vec3(-u.H[0], u.H[1], u.H[2]));
  return State66(Vec3(-u.D[0], u.D[1], -u.D[2]), Vec3(u.H[0], -u.H[1], u.H[2]));
}

double pulse_h3(const PulseSpec& p, double y, double t, const MaterialParams& mat) {
  if (t < 0.0 || t > p.period_s) return 0.0;
  const double envelope = 1.0 - std::cos(2.0 * M_PI * t / p.period_s);
  const double gauss = std::exp(-(y * y) / (p.waist_m * p.waist_m));
  return p.b0_tesla / mat.mu0 * envelope * gauss;
}

}  // namespace

Flux66 kerr_flux(const State66& u, const Vec3& omega, const MaterialParams& mat) {
  return Flux66(-omega.cross(u.H), omega.cross(E_of_D(u.D, mat)) / mat.mu0);
}

Flux66 godunov_flux(const State66& uL, const State66& uR, const Vec3& omega,
                    const MaterialParams& mat, RiemannSolverKind solver) {
  if (nearly_equal_states(uL, uR)) return kerr_flux(uL, omega, mat);
  if (solver == RiemannSolverKind::six) {
    const WaveFan66 fan = solve_riemann66(uL, uR, omega, mat);
    return kerr_flux(sample66(fan, 0.0, mat), omega, mat);
  }
  if (omega[2] != 0.0 || !is_tm(uL) || !is_tm(uR))
    throw std::invalid_argument("godunov_flux: TM solver requires TM states and in-plane omega");
  const Vec2 w2(omega[0], omega[1]);
  const WaveFanTM fan = solve_riemann_tm(to_tm(uL), to_tm(uR), w2, mat);
  return kerr_flux(from_tm(sample_tm(fan, 0.0, mat)), omega, mat);
}

double reconstruct_minmod(double w_left, double w_center, double w_right) {
  const double a = w_center - w_left;
  const double b = w_right - w_center;
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

void fill_ghosts(CellField& field, const GridGeom& g, const SchemeOptions& opts,
                 const MaterialParams& mat, double t) {
  const int nx = g.nx;
  const int ny = g.dim == 2 ? g.ny : 1;

  const auto fill_x_side = [&](Side side) {
    const BoundaryKind kind = opts.boundary[static_cast<int>(side)];
    const bool low = side == Side::x_min;
    for (int j = 0; j < ny; ++j) {
      const int edge = low ? 0 : nx - 1;
      for (int gidx = 1; gidx <= CellField::kGhost; ++gidx) {
        const int ig = low ? -gidx : nx - 1 + gidx;
        switch (kind) {
          case BoundaryKind::outflow:
            field.at(ig, j) = field.at(edge, j);
            break;
          case BoundaryKind::reflect_symmetry: {
            const int mirror = low ? gidx - 1 : nx - gidx;
            field.at(ig, j) = reflect_state(field.at(mirror, j), 0);
            break;
          }
          case BoundaryKind::dirichlet_timed: {
            State66 u = field.at(edge, j);
            if (opts.pulse) {
              const double y = g.dim == 2 ? g.y_min + (j + 0.5) * g.dy : 0.0;
              u.H[2] = pulse_h3(*opts.pulse, y, t, mat);
            }
            field.at(ig, j) = u;
            break;
          }
        }
      }
    }
  };

  fill_x_side(Side::x_min);
  fill_x_side(Side::x_max);
  if (g.dim != 2) return;

  const auto fill_y_side = [&](Side side) {
    const BoundaryKind kind = opts.boundary[static_cast<int>(side)];
    const bool low = side == Side::y_min;
    for (int i = -CellField::kGhost; i < nx + CellField::kGhost; ++i) {
      const int edge = low ? 0 : ny - 1;
      for (int gidx = 1; gidx <= CellField::kGhost; ++gidx) {
        const int jg = low ? -gidx : ny - 1 + gidx;
        switch (kind) {
          case BoundaryKind::outflow:
            field.at(i, jg) = field.at(i, edge);
            break;
          case BoundaryKind::reflect_symmetry: {
            const int mirror = low ? gidx - 1 : ny - gidx;
            field.at(i, jg) = reflect_state(field.at(i, mirror), 1);
            break;
          }
          case BoundaryKind::dirichlet_timed: {
            State66 u = field.at(i, edge);
            if (opts.pulse) u.H[2] = 0.0;  // the pulse source is an x-side condition
            field.at(i, jg) = u;
            break;
          }
        }
      }
    }
  };

  fill_y_side(Side::y_min);
  fill_y_side(Side::y_max);
}

std::optional<double> divergence_ratio(const CellField& field, const Grid2D& grid) {
  const double dx = grid.dx();
  const double dy = grid.dy();
  double num = 0.0;
  double den = 0.0;
  for (int j = 1; j < grid.ny - 1; ++j) {
    for (int i = 1; i < grid.nx - 1; ++i) {
      double grad_sq = 0.0;
      Vec3 ddx, ddy;
      for (int k = 0; k < 3; ++k) {
        ddx[k] = (field.at(i + 1, j).D[k] - field.at(i - 1, j).D[k]) / (2.0 * dx);
        ddy[k] = (field.at(i, j + 1).D[k] - field.at(i, j - 1).D[k]) / (2.0 * dy);
        grad_sq += ddx[k] * ddx[k] + ddy[k] * ddy[k];
      }
      num += std::abs(ddx[0] + ddy[1]);
      den += std::sqrt(grad_sq);
    }
  }
  if (den == 0.0) return std::nullopt;
  return num / den;
}

void write_snapshot_csv(const std::string& path, const CellField& field, const GridGeom& g,
                        bool with_chi, const MaterialParams& mat) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_snapshot_csv: cannot open " + path);
  char buf[64];
  const auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof buf, "%.16e%c", v, sep);
    os << buf;
  };
  const int ny = g.dim == 2 ? g.ny : 1;
  os << (g.dim == 2 ? "x,y," : "x,") << "D1,D2,D3,H1,H2,H3" << (with_chi ? ",chi\n" : "\n");
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const State66& u = field.at(i, j);
      put(g.x_min + (i + 0.5) * g.dx, ',');
      if (g.dim == 2) put(g.y_min + (j + 0.5) * g.dy, ',');
      for (int k = 0; k < 6; ++k) {
        const bool last = (k == 5) && !with_chi;
        put(u.component(k), last ? '\n' : ',');
      }
      if (with_chi) {
        const double p = p_of_d(u.D.norm(), mat);
        put(mat.eps_r * p * p, '\n');
      }
    }
  }
}

CellField advance(const CellField& field, const GridGeom& g, const SchemeOptions& opts,
                  const MaterialParams& mat, double t, double dt, RiemannSolverKind solver) {
  return advance_with_flux(field, g, opts, mat, t, dt,
                           [&](const State66& uL, const State66& uR, int axis) {
                             return godunov_flux(uL, uR, axis_vec(axis), mat, solver);
                           });
}

}  // namespace kerr
