/*! \file constitutive.hpp
 *  \brief Constitutive laws of the Kerr medium: the cubic map q, its inverse p,
 *         the field map E(D), characteristic speeds and the TM energy density. */

#ifndef KERR_CONSTITUTIVE_HPP
#define KERR_CONSTITUTIVE_HPP

#include "kerr/material.hpp"
#include "kerr/state.hpp"

namespace kerr {

/// q(e) = eps0 (e + eps_r e^3). Strictly increasing, odd.
double q_of_e(double e, const MaterialParams& mat);

/// Inverse of q: the unique real e with q(e) = d.
double p_of_d(double d, const MaterialParams& mat);

/// Electric field from the displacement: E = D / (eps0 (1 + eps_r p^2(|D|))),
/// so that |E| = p(|D|) and E is parallel to D.
Vec3 E_of_D(const Vec3& D, const MaterialParams& mat);

/// Nonnegative characteristic speeds of the 6x6 system in direction omega.
/// lambda1 bounds the contact families (speeds -lambda1, +lambda1); lambda the
/// 2/5 families (speeds -lambda, +lambda). Always 0 < lambda <= lambda1 <= c,
/// with equality lambda == lambda1 iff omega x D == 0.
struct Eigenvalues66 {
  double lambda1;
  double lambda;
};
Eigenvalues66 eigenvalues66(const Vec3& D, const Vec3& omega, const MaterialParams& mat);

/// Electromagnetic energy density (J/m^3) and flux of a TM state:
/// eta = eps0 (|E|^2 / 2 + (3 eps_r / 4) |E|^4) + mu0 H3^2 / 2,
/// Q = H3 (E2, -E1). eta is the mathematical entropy of the TM system.
struct EnergyTM {
  double eta;
  Vec2 Q;
};
EnergyTM energy_tm(const StateTM& u, const MaterialParams& mat);

}  // namespace kerr

#endif  // KERR_CONSTITUTIVE_HPP
