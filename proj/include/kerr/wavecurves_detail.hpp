// Internal wave-curve helpers shared between the Riemann solvers. These carry
// precomputed quantities (the scalar frame, the Liu tangency point) so the
// solvers' Newton loops avoid redundant cubic inversions.

#ifndef KERR_WAVECURVES_DETAIL_HPP
#define KERR_WAVECURVES_DETAIL_HPP

#include "kerr/material.hpp"

namespace kerr::detail {

/// Scalar-frame evaluation at (d, d0): field magnitude and the rational
/// factors entering f and lambda^2.
struct Frame {
  double e;   // |E| = p(sqrt(d0^2 + d^2))
  double N;   // 1 + eps_r e^2
  double M;   // 1 + 3 eps_r e^2
  double e0;  // longitudinal E component

  double lambda_sq(const MaterialParams& mat) const {
    return mat.c * mat.c * (N + 2.0 * mat.eps_r * e0 * e0) / (N * M);
  }
};

Frame frame_at(double d, double d0, const MaterialParams& mat);

/// varphi_tm / its d2-derivative with d_star(d1) precomputed by the caller.
double varphi_tm_cached(double d1, double d2, double d0, double dstar1,
                        const MaterialParams& mat);
double dvarphi_dd2_cached(double d1, double d2, double d0, double dstar1,
                          const MaterialParams& mat);

/// transfer_G with a caller-provided initial guess (warm start).
double transfer_G_guess(double d, double d0_minus, double d0_plus,
                        const MaterialParams& mat, double guess);

}  // namespace kerr::detail

#endif  // KERR_WAVECURVES_DETAIL_HPP
