#ifndef KERR_MATERIAL_HPP
#define KERR_MATERIAL_HPP

#include <cmath>
#include <stdexcept>

namespace kerr {

/// Physical constants of a Kerr medium. The relative Kerr permittivity
/// eps_r carries units m^2/V^2 so that eps_r*|E|^2 is dimensionless.
struct MaterialParams {
  double eps0;   // vacuum permittivity (F/m)
  double mu0;    // vacuum permeability (H/m)
  double eps_r;  // Kerr relative permittivity (m^2/V^2)
  double c;      // light speed (m/s), derived as 1/sqrt(eps0*mu0)

  static MaterialParams make(double eps0, double mu0, double eps_r) {
    if (!(eps0 > 0.0) || !(mu0 > 0.0) || !(eps_r > 0.0))
      throw std::invalid_argument("MaterialParams: eps0, mu0, eps_r must be positive");
    return MaterialParams{eps0, mu0, eps_r, 1.0 / std::sqrt(eps0 * mu0)};
  }

  /// Vacuum eps0/mu0 with a given Kerr coefficient.
  static MaterialParams vacuum_kerr(double eps_r = 2e-18) {
    constexpr double eps0 = 8.854187817e-12;                 // F/m
    constexpr double mu0 = 4.0e-7 * 3.14159265358979323846;  // H/m
    return make(eps0, mu0, eps_r);
  }
};

}  // namespace kerr

#endif  // KERR_MATERIAL_HPP
