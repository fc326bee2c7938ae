#include "kerr/constitutive.hpp"

#include <cmath>
#include <stdexcept>

namespace kerr {

double q_of_e(double e, const MaterialParams& mat) {
  return mat.eps0 * (e + mat.eps_r * e * e * e);
}

// The depressed cubic eps_r e^3 + e = d/eps0 has a positive linear coefficient,
// hence exactly one real root. With e = 2 sqrt(a/3) sinh(theta), a = 1/eps_r,
// the equation collapses to sinh(3 theta) = const; the hyperbolic form is
// monotone and odd, so it stays accurate for both tiny and huge |d|.
double p_of_d(double d, const MaterialParams& mat) {
  const double a = 1.0 / mat.eps_r;
  const double scale = std::sqrt(a / 3.0);
  const double arg = 1.5 * d / (mat.eps0 * scale);
  double e = 2.0 * scale * std::sinh(std::asinh(arg) / 3.0);
  // One Newton polish on q(e) = d; q'(e) = eps0 (1 + 3 eps_r e^2) > 0.
  const double dq = mat.eps0 * (1.0 + 3.0 * mat.eps_r * e * e);
  e -= (q_of_e(e, mat) - d) / dq;
  return e;
}

Vec3 E_of_D(const Vec3& D, const MaterialParams& mat) {
  const double p = p_of_d(D.norm(), mat);
  return D / (mat.eps0 * (1.0 + mat.eps_r * p * p));
}

Eigenvalues66 eigenvalues66(const Vec3& D, const Vec3& omega, const MaterialParams& mat) {
  if (std::abs(omega.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("eigenvalues66: omega must be a unit vector");
  const Vec3 E = E_of_D(D, mat);
  const double e2 = E.squaredNorm();
  const double eo = E.dot(omega);
  const double c2 = mat.c * mat.c;
  const double lam1sq = c2 / (1.0 + mat.eps_r * e2);
  const double lamsq = c2 * (1.0 + mat.eps_r * (e2 + 2.0 * eo * eo)) /
                       ((1.0 + mat.eps_r * e2) * (1.0 + 3.0 * mat.eps_r * e2));
  return Eigenvalues66{std::sqrt(lam1sq), std::sqrt(lamsq)};
}

// Electric part is the field energy of the Kerr constitutive law,
// int E . dD = eps0 (e^2 / 2 + (3 eps_r / 4) e^4); this is the convex entropy
// whose production rate across Liu shocks has the closed form checked in the
// dissipation tests.
EnergyTM energy_tm(const StateTM& u, const MaterialParams& mat) {
  const Vec3 E3 = E_of_D(Vec3(u.D1, u.D2, 0.0), mat);
  const double e2 = E3.squaredNorm();
  const double eta =
      0.5 * mat.eps0 * (e2 + 1.5 * mat.eps_r * e2 * e2) + 0.5 * mat.mu0 * u.H3 * u.H3;
  return EnergyTM{eta, Vec2(u.H3 * E3[1], -u.H3 * E3[0])};
}

}  // namespace kerr
