/*! \file wavecurves.hpp
 *  \brief Scalar wave-curve machinery shared by the 6x6 and TM Riemann solvers.
 *
 *  All quantities live in the scalar frame of a fixed propagation direction:
 *  d0 is the longitudinal displacement component, d the transverse one
 *  (a magnitude >= 0 in 6x6 usage, signed in TM usage), h the transverse
 *  magnetic scalar. f is the transverse field map whose d-derivative is the
 *  squared characteristic speed; S and R give the magnetic jump across shocks
 *  and rarefactions; phi66 / varphi_tm assemble the wave curves.
 */

#ifndef KERR_WAVECURVES_HPP
#define KERR_WAVECURVES_HPP

#include "kerr/material.hpp"

namespace kerr {

/// f(d, d0) = c^2 d / (1 + eps_r p^2(sqrt(d0^2 + d^2))).
/// Strictly increasing and odd in d; concave on d >= 0.
double f_of(double d, double d0, const MaterialParams& mat);

/// d(f)/dd, equal to lambda_scalar(|d|, d0)^2.
double df_dd(double d, double d0, const MaterialParams& mat);

/// Characteristic speed of the 2/5 (resp. TM 1/3) families as a function of
/// the scalar frame. Requires d >= 0.
double lambda_scalar(double d, double d0, const MaterialParams& mat);

/// Magnetic jump magnitude across a shock between transverse components
/// d_minus and d_plus: sqrt((f(d+) - f(d-)) (d+ - d-)). Symmetric, >= 0.
double S_of(double d_plus, double d_minus, double d0, const MaterialParams& mat);

/// Magnetic jump across a rarefaction: integral of lambda over [d1, d2].
/// Requires 0 <= d1 <= d2.
double R_of(double d1, double d2, double d0, const MaterialParams& mat);

/// 6x6 wave function (d1, d2 >= 0): S(d1, d2, d0) for d2 <= d1 (shock leg),
/// -R(d1, d2, d0) for d1 <= d2 (rarefaction leg). C^1 and decreasing in d2.
double phi66(double d1, double d2, double d0, const MaterialParams& mat);

/// Derivative of phi66 with respect to d2 (negative everywhere).
double dphi66_dd2(double d1, double d2, double d0, const MaterialParams& mat);

/// Liu tangency point: the unique d* with sign(d*) = -sign(d_minus) such that
/// the secant slope from d_minus to d* equals df_dd at d*. d_star(0) = 0.
double d_star(double d_minus, double d0, const MaterialParams& mat);

/// TM composite wave function on signed arguments: rarefaction when
/// |d1| <= |d2| and d1 d2 >= 0, Liu shock when d2 lies between d*(d1) and d1,
/// otherwise shock-plus-attached-rarefaction. Decreasing and C^1 in d2.
double varphi_tm(double d1, double d2, double d0, const MaterialParams& mat);

/// Derivative of varphi_tm with respect to d2 (negative everywhere).
double dvarphi_dd2(double d1, double d2, double d0, const MaterialParams& mat);

/// Stationary-contact transfer map G = f(., d0_plus)^{-1} o f(., d0_minus):
/// the unique x with f(x, d0_plus) = f(d, d0_minus). Increasing, G(0) = 0.
double transfer_G(double d, double d0_minus, double d0_plus, const MaterialParams& mat);

}  // namespace kerr

#endif  // KERR_WAVECURVES_HPP
