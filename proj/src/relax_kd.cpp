#include "kerr/relax_kd.hpp"

#include <cmath>

#include "kerr/constitutive.hpp"

namespace kerr {

StateKD project_equilibrium(const State66& u, const MaterialParams& mat) {
  const double p = p_of_d(u.D.norm(), mat);
  return StateKD{u, mat.eps_r * p * p};
}

Flux66 kd_flux(const StateKD& uL, const StateKD& uR, const Vec3& omega,
               const MaterialParams& mat) {
  const double rm = std::sqrt(1.0 + uL.chi);
  const double rp = std::sqrt(1.0 + uR.chi);
  const double rs = rm + rp;
  const Vec3 Em = uL.u.D / (mat.eps0 * (1.0 + uL.chi));
  const Vec3 Ep = uR.u.D / (mat.eps0 * (1.0 + uR.chi));
  const Vec3 fd = -omega.cross((rp * uL.u.H + rm * uR.u.H) / rs) +
                  omega.cross(omega.cross(rp * rm * (Ep - Em) / (mat.c * mat.mu0 * rs)));
  const Vec3 fh = omega.cross((rp * Ep + rm * Em) / (mat.mu0 * rs)) +
                  mat.c * omega.cross(omega.cross((uR.u.H - uL.u.H) / rs));
  return Flux66(fd, fh);
}

CellField kd_advance(const CellField& field, const GridGeom& g, const SchemeOptions& opts,
                     const MaterialParams& mat, double t, double dt) {
  const Vec3 axes[2] = {Vec3::UnitX(), Vec3::UnitY()};
  return advance_with_flux(field, g, opts, mat, t, dt,
                           [&](const State66& uL, const State66& uR, int axis) {
                             return kd_flux(project_equilibrium(uL, mat),
                                            project_equilibrium(uR, mat), axes[axis], mat);
                           });
}

}  // namespace kerr
