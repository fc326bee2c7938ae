/*! \file relax_kd.hpp
 *  \brief Kerr-Debye relaxation scheme in the relaxed (zero response time)
 *         limit: equilibrium projection plus the linearly-degenerate Riemann
 *         flux of the augmented system.
 */

#ifndef KERR_RELAX_KD_HPP
#define KERR_RELAX_KD_HPP

#include "kerr/fv.hpp"
#include "kerr/material.hpp"
#include "kerr/state.hpp"

namespace kerr {

/// Projects a Kerr state onto the Kerr-Debye equilibrium manifold:
/// chi = eps_r p^2(|D|).
StateKD project_equilibrium(const State66& u, const MaterialParams& mat);

/// Interface flux of the homogeneous Kerr-Debye system (all fields linearly
/// degenerate), with r_pm = sqrt(1 + chi_pm).
Flux66 kd_flux(const StateKD& uL, const StateKD& uR, const Vec3& omega,
               const MaterialParams& mat);

/// One step of the relaxation scheme: projection onto equilibrium at the
/// reconstructed traces, then the conservative update. Shares the fv update
/// machinery (same limiter, same Heun stage structure).
CellField kd_advance(const CellField& field, const GridGeom& g, const SchemeOptions& opts,
                     const MaterialParams& mat, double t, double dt);

}  // namespace kerr

#endif  // KERR_RELAX_KD_HPP
