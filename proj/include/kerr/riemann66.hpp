/*! \file riemann66.hpp
 *  \brief Exact Riemann solver for the full-vector 6x6 Kerr system.
 *
 *  The self-similar solution is a superposition of (at most) a 1-contact,
 *  a 2-wave (Lax shock or rarefaction), a stationary contact, a 5-wave and a
 *  6-contact. solve_riemann66 builds the wave fan; sample66 evaluates it at
 *  any self-similar speed xi = x/t.
 */

#ifndef KERR_RIEMANN66_HPP
#define KERR_RIEMANN66_HPP

#include <array>
#include <iosfwd>
#include <string>

#include "kerr/constitutive.hpp"
#include "kerr/material.hpp"
#include "kerr/state.hpp"

namespace kerr {

enum class WaveType { trivial, contact, shock, rarefaction, composite, stationary_contact };

const char* wave_type_name(WaveType t);

/// One wave of a fan. speed_head == speed_tail except for rarefactions.
struct WaveDescriptor {
  WaveType type = WaveType::trivial;
  double speed_head = 0.0;
  double speed_tail = 0.0;
};

/// Ordered description of the self-similar 6x6 Riemann solution.
/// states = [u-, u1, u*, u**, u2, u+]; waves = [1-contact, 2-wave,
/// stationary contact, 5-wave, 6-contact], speeds nondecreasing.
struct WaveFan66 {
  Vec3 omega = Vec3::UnitX();
  Vec3 zeta = Vec3::Zero();  // transverse direction; zero in the V = 0 branch
  bool has_zeta = false;
  std::array<State66, 6> states;
  std::array<WaveDescriptor, 5> waves;

  struct Scalars {
    double d0m = 0.0, d0p = 0.0;       // longitudinal D components
    double d1 = 0.0, d2 = 0.0;         // transverse magnitudes after the contacts
    double d_star = 0.0, d_star2 = 0.0;  // transverse magnitudes of u*, u**
    double sigma_m = 0.0, sigma_p = 0.0;  // 1- and 6-contact speeds
  } s;
};

/// V of the branch dichotomy: omega x (H+ - H- - omega x (sigma+ D+ - sigma- D-)).
/// V = 0 selects the two-shock degenerate structure.
Vec3 compute_V(const State66& u_minus, const State66& u_plus, const Vec3& omega,
               const MaterialParams& mat);

/// Solves the Riemann problem exactly. Throws on root-find non-convergence
/// (a numerics bug: existence and uniqueness hold for all data).
WaveFan66 solve_riemann66(const State66& u_minus, const State66& u_plus,
                          const Vec3& omega, const MaterialParams& mat);

/// Evaluates the self-similar solution at speed xi; ties at a discontinuity
/// resolve to the right-hand state.
State66 sample66(const WaveFan66& fan, double xi, const MaterialParams& mat);

/// Structural validation of a fan: Rankine-Hugoniot residuals, speed
/// ordering, Lax inequalities, stationary-contact conditions.
struct FanCheck {
  bool ok = true;
  double max_rh_residual = 0.0;        // relative
  double max_lax_violation = 0.0;      // absolute, units of speed
  double max_ordering_violation = 0.0; // absolute, units of speed
  double stationary_residual = 0.0;    // relative
  std::string detail;
};
FanCheck validate_fan(const WaveFan66& fan, const MaterialParams& mat);

/// Debug dump: one CSV row per wave (index, type, speeds, both side states).
void dump_fan_csv(std::ostream& os, const WaveFan66& fan);

}  // namespace kerr

#endif  // KERR_RIEMANN66_HPP
