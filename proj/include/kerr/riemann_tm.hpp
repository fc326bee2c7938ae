/*! \file riemann_tm.hpp
 *  \brief Exact Riemann solver for the 3x3 Transverse Magnetic Kerr system.
 *
 *  The 1- and 3-characteristic families are not genuinely nonlinear, so
 *  admissibility is Liu's condition (E) and wave curves may contain composite
 *  waves: a Liu shock tangent to an attached rarefaction at the point d*.
 */

#ifndef KERR_RIEMANN_TM_HPP
#define KERR_RIEMANN_TM_HPP

#include <array>
#include <iosfwd>
#include <string>

#include "kerr/material.hpp"
#include "kerr/riemann66.hpp"
#include "kerr/state.hpp"

namespace kerr {

/// One wave of a TM fan. For composite waves sigma_shock is the Liu shock
/// speed (tangent to the attached rarefaction), d_junction / h3_junction the
/// state where shock and rarefaction meet.
struct WaveTM {
  WaveType type = WaveType::trivial;
  bool composite = false;
  double speed_head = 0.0;
  double speed_tail = 0.0;
  double sigma_shock = 0.0;
  double d_outer = 0.0;     // signed transverse parameter of the outer state
  double d_inner = 0.0;     // signed transverse parameter of the inner state
  double d_junction = 0.0;
  double h3_outer = 0.0;
  double h3_junction = 0.0;
  double d0 = 0.0;
};

/// Self-similar TM Riemann solution: 1-wave, stationary contact, 3-wave.
/// states = [u-, u(1), u(2), u+].
struct WaveFanTM {
  Vec2 omega = Vec2::UnitX();
  std::array<StateTM, 4> states;
  std::array<WaveTM, 3> waves;
  struct Scalars {
    double d0m = 0.0, d0p = 0.0;  // longitudinal components
    double dm = 0.0, dp = 0.0;    // signed transverse components of the data
    double d1 = 0.0, d2 = 0.0;    // transverse components of u(1), u(2)
  } s;
};

WaveFanTM solve_riemann_tm(const StateTM& u_minus, const StateTM& u_plus,
                           const Vec2& omega, const MaterialParams& mat);

/// Evaluates the fan at self-similar speed xi; ties resolve rightward.
StateTM sample_tm(const WaveFanTM& fan, double xi, const MaterialParams& mat);

/// Entropy production rate -sigma [eta] + [H3 (omega x E)] of a discontinuity
/// satisfying Rankine-Hugoniot (checked; throws otherwise). Nonpositive for
/// Liu shocks, zero for contacts.
double shock_dissipation(double sigma, const StateTM& u_minus, const StateTM& u_plus,
                         const Vec2& omega, const MaterialParams& mat);

/// Liu condition (E) verified by sampling secant slopes along the Hugoniot
/// segment (plus the tolerance 1e-9 c). sigma < 0 is checked as a 1-shock,
/// sigma > 0 as a 3-shock.
bool liu_admissible(double sigma, const StateTM& u_minus, const StateTM& u_plus,
                    const Vec2& omega, const MaterialParams& mat, int samples = 64);

/// Structural validation of a TM fan.
struct FanCheckTM {
  bool ok = true;
  double max_rh_residual = 0.0;
  double stationary_residual = 0.0;  // relative mismatch of f across the contact
  double h3_mismatch = 0.0;          // relative H3 mismatch across the contact
  bool liu_ok = true;
  std::string detail;
};
FanCheckTM validate_fan_tm(const WaveFanTM& fan, const MaterialParams& mat);

/// Debug dump mirroring the 6x6 fan CSV.
void dump_fan_tm_csv(std::ostream& os, const WaveFanTM& fan);

}  // namespace kerr

#endif  // KERR_RIEMANN_TM_HPP
