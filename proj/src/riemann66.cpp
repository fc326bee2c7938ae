#include "kerr/riemann66.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "kerr/wavecurves.hpp"
#include "kerr/wavecurves_detail.hpp"

namespace kerr {
namespace {

double contact_speed(double e_norm_sq, double sign, const MaterialParams& mat) {
  return sign * mat.c / std::sqrt(1.0 + mat.eps_r * e_norm_sq);
}

// Classification threshold for reporting a wave as trivial.
bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-14 * std::max({std::abs(a), std::abs(b), 1e-3});
}

WaveDescriptor make_two_wave(double d_left, double d_right, double d0,
                             const MaterialParams& mat) {
  // 2-family speed is -lambda; shock when the transverse magnitude drops.
  WaveDescriptor w;
  if (nearly_equal(d_left, d_right)) {
    w.type = WaveType::trivial;
    w.speed_head = w.speed_tail = -lambda_scalar(std::abs(d_left), d0, mat);
  } else if (d_right < d_left) {
    w.type = WaveType::shock;
    const double slope = (f_of(d_left, d0, mat) - f_of(d_right, d0, mat)) / (d_left - d_right);
    w.speed_head = w.speed_tail = -std::sqrt(slope);
  } else {
    w.type = WaveType::rarefaction;
    w.speed_head = -lambda_scalar(d_left, d0, mat);
    w.speed_tail = -lambda_scalar(d_right, d0, mat);
  }
  return w;
}

WaveDescriptor make_five_wave(double d_left, double d_right, double d0,
                              const MaterialParams& mat) {
  WaveDescriptor w;
  if (nearly_equal(d_left, d_right)) {
    w.type = WaveType::trivial;
    w.speed_head = w.speed_tail = lambda_scalar(std::abs(d_left), d0, mat);
  } else if (d_left < d_right) {
    w.type = WaveType::shock;
    const double slope = (f_of(d_right, d0, mat) - f_of(d_left, d0, mat)) / (d_right - d_left);
    w.speed_head = w.speed_tail = std::sqrt(slope);
  } else {
    w.type = WaveType::rarefaction;
    w.speed_head = lambda_scalar(d_left, d0, mat);
    w.speed_tail = lambda_scalar(d_right, d0, mat);
  }
  return w;
}

}  // namespace

const char* wave_type_name(WaveType t) {
  switch (t) {
    case WaveType::trivial: return "trivial";
    case WaveType::contact: return "contact";
    case WaveType::shock: return "shock";
    case WaveType::rarefaction: return "rarefaction";
    case WaveType::composite: return "composite";
    case WaveType::stationary_contact: return "stationary_contact";
  }
  return "?";
}

Vec3 compute_V(const State66& u_minus, const State66& u_plus, const Vec3& omega,
               const MaterialParams& mat) {
  if (std::abs(omega.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("compute_V: omega must be a unit vector");
  const double em2 = E_of_D(u_minus.D, mat).squaredNorm();
  const double ep2 = E_of_D(u_plus.D, mat).squaredNorm();
  const double sm = contact_speed(em2, -1.0, mat);
  const double sp = contact_speed(ep2, +1.0, mat);
  const Vec3 w = u_plus.H - u_minus.H - omega.cross(sp * u_plus.D - sm * u_minus.D);
  return omega.cross(w);
}

WaveFan66 solve_riemann66(const State66& u_minus, const State66& u_plus,
                          const Vec3& omega, const MaterialParams& mat) {
  if (std::abs(omega.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("solve_riemann66: omega must be a unit vector");

  WaveFan66 fan;
  fan.omega = omega;
  fan.states[0] = u_minus;
  fan.states[5] = u_plus;

  if (u_minus.D == u_plus.D && u_minus.H == u_plus.H) {
    // Identical data: every wave is trivial and the states are exact copies.
    const Eigenvalues66 ev = eigenvalues66(u_minus.D, omega, mat);
    for (int k = 1; k < 5; ++k) fan.states[k] = u_minus;
    fan.waves[0] = {WaveType::trivial, -ev.lambda1, -ev.lambda1};
    fan.waves[1] = {WaveType::trivial, -ev.lambda, -ev.lambda};
    fan.waves[2] = {WaveType::stationary_contact, 0.0, 0.0};
    fan.waves[3] = {WaveType::trivial, ev.lambda, ev.lambda};
    fan.waves[4] = {WaveType::trivial, ev.lambda1, ev.lambda1};
    fan.s.d0m = fan.s.d0p = u_minus.D.dot(omega);
    const Vec3 t = -omega.cross(omega.cross(u_minus.D));
    fan.s.d1 = fan.s.d2 = fan.s.d_star = fan.s.d_star2 = t.norm();
    fan.s.sigma_m = -ev.lambda1;
    fan.s.sigma_p = ev.lambda1;
    return fan;
  }

  const double d0m = u_minus.D.dot(omega);
  const double d0p = u_plus.D.dot(omega);
  const double em2 = E_of_D(u_minus.D, mat).squaredNorm();
  const double ep2 = E_of_D(u_plus.D, mat).squaredNorm();
  const double sigma_m = contact_speed(em2, -1.0, mat);
  const double sigma_p = contact_speed(ep2, +1.0, mat);
  fan.s.d0m = d0m;
  fan.s.d0p = d0p;
  fan.s.sigma_m = sigma_m;
  fan.s.sigma_p = sigma_p;

  const Vec3 V = omega.cross(u_plus.H - u_minus.H -
                             omega.cross(sigma_p * u_plus.D - sigma_m * u_minus.D));
  const double tol_V = 1e-12 * mat.c * (u_minus.D.norm() + u_plus.D.norm() + 1e-300);

  const Vec3 t_minus = -omega.cross(omega.cross(u_minus.D));  // transverse part of D-
  const Vec3 t_plus = -omega.cross(omega.cross(u_plus.D));
  const double d1 = t_minus.norm();
  const double d2 = t_plus.norm();
  fan.s.d1 = d1;
  fan.s.d2 = d2;

  if (V.norm() <= tol_V) {
    // Degenerate branch: Lax 2-shock down to a longitudinal state, stationary
    // contact, Lax 5-shock back up. The 1- and 6-contacts are trivial.
    fan.has_zeta = false;
    fan.states[1] = u_minus;
    fan.states[2] = State66(d0m * omega, u_minus.H - sigma_m * omega.cross(u_minus.D));
    fan.states[3] = State66(d0p * omega, u_plus.H - sigma_p * omega.cross(u_plus.D));
    fan.states[4] = u_plus;
    fan.s.d_star = 0.0;
    fan.s.d_star2 = 0.0;

    fan.waves[0] = {WaveType::trivial, sigma_m, sigma_m};
    fan.waves[1] = d1 > 0.0 ? WaveDescriptor{WaveType::shock, sigma_m, sigma_m}
                            : WaveDescriptor{WaveType::trivial, sigma_m, sigma_m};
    fan.waves[2] = {WaveType::stationary_contact, 0.0, 0.0};
    fan.waves[3] = d2 > 0.0 ? WaveDescriptor{WaveType::shock, sigma_p, sigma_p}
                            : WaveDescriptor{WaveType::trivial, sigma_p, sigma_p};
    fan.waves[4] = {WaveType::trivial, sigma_p, sigma_p};
    return fan;
  }

  const Vec3 zeta = V / V.norm();
  fan.zeta = zeta;
  fan.has_zeta = true;

  // 1- and 6-contacts rotate the transverse displacement onto zeta.
  const Vec3 D1v = d0m * omega + d1 * zeta;
  const Vec3 D2v = d0p * omega + d2 * zeta;
  const State66 u1(D1v, u_minus.H + sigma_m * omega.cross(D1v - u_minus.D));
  const State66 u2(D2v, u_plus.H - sigma_p * omega.cross(u_plus.D - D2v));
  fan.states[1] = u1;
  fan.states[4] = u2;

  const Vec3 oxz = omega.cross(zeta);
  const double h1 = u1.H.dot(oxz);
  const double h2 = u2.H.dot(oxz);
  const double target = h2 - h1;

  // Scalar equation for d*: phi(d1, d*) + phi(d2, G(d*)) = h2 - h1, with the
  // left side strictly decreasing from its value at d* = 0.
  double g_warm = std::max(d1, d2);
  const auto eval_g = [&](double x) {
    g_warm = detail::transfer_G_guess(x, d0m, d0p, mat, g_warm == 0.0 ? x : g_warm);
    return phi66(d1, x, d0m, mat) + phi66(d2, g_warm, d0p, mat) - target;
  };

  double d_star_val = 0.0;
  const double g0 = eval_g(0.0);  // cheap: both wave-function legs are shock legs at 0
  if (g0 > 0.0) {
    // Safeguarded Newton with a lazy upper bracket; the root sits near the
    // data scale, so start between the contact-side magnitudes.
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    const double dscale = std::max(d1, d2) + 1e-3 * (u_minus.D.norm() + u_plus.D.norm() + 1e-30);
    double x = 0.5 * (d1 + d2);
    if (x <= 0.0) x = 0.5 * dscale;
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
      const double Gx = detail::transfer_G_guess(x, d0m, d0p, mat, g_warm);
      g_warm = Gx;
      const double g = phi66(d1, x, d0m, mat) + phi66(d2, Gx, d0p, mat) - target;
      if (g > 0.0) lo = std::max(lo, x); else hi = std::min(hi, x);
      const double dG = df_dd(x, d0m, mat) / df_dd(Gx, d0p, mat);
      const double dg = dphi66_dd2(d1, x, d0m, mat) + dphi66_dd2(d2, Gx, d0p, mat) * dG;
      double xn = x - g / dg;
      if (!(xn > lo) || !(xn < hi))
        xn = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * x + dscale;
      if (std::abs(xn - x) <= 1e-13 * std::max(1.0, std::abs(x))) {
        x = xn;
        converged = true;
        break;
      }
      x = xn;
    }
    if (!converged) throw std::runtime_error("solve_riemann66: d* iteration did not converge");
    d_star_val = x;
  }
  const double d_star2_val = detail::transfer_G_guess(d_star_val, d0m, d0p, mat, g_warm);
  fan.s.d_star = d_star_val;
  fan.s.d_star2 = d_star2_val;

  const State66 u_star(d0m * omega + d_star_val * zeta,
                       u1.H + phi66(d1, d_star_val, d0m, mat) * oxz);
  const State66 u_star2(d0p * omega + d_star2_val * zeta,
                        u2.H - phi66(d2, d_star2_val, d0p, mat) * oxz);
  fan.states[2] = u_star;
  fan.states[3] = u_star2;

  const bool c1_trivial = (u1.D - u_minus.D).norm() <= 1e-14 * (u_minus.D.norm() + 1e-300);
  const bool c6_trivial = (u2.D - u_plus.D).norm() <= 1e-14 * (u_plus.D.norm() + 1e-300);
  fan.waves[0] = {c1_trivial ? WaveType::trivial : WaveType::contact, sigma_m, sigma_m};
  fan.waves[1] = make_two_wave(d1, d_star_val, d0m, mat);
  fan.waves[2] = {WaveType::stationary_contact, 0.0, 0.0};
  fan.waves[3] = make_five_wave(d_star2_val, d2, d0p, mat);
  fan.waves[4] = {c6_trivial ? WaveType::trivial : WaveType::contact, sigma_p, sigma_p};
  return fan;
}

State66 sample66(const WaveFan66& fan, double xi, const MaterialParams& mat) {
  for (int k = 0; k < 5; ++k) {
    const WaveDescriptor& w = fan.waves[k];
    if (xi < w.speed_head) return fan.states[k];
    if (w.type == WaveType::rarefaction && xi < w.speed_tail) {
      // Interior of a centred rarefaction: invert the monotone map d -> speed.
      const bool two_family = (k == 1);
      const double d0 = two_family ? fan.s.d0m : fan.s.d0p;
      // Parameter ranges: [d1, d*] for the 2-family, [d2, d**] for the 5-family.
      double lo = two_family ? fan.s.d1 : fan.s.d2;
      double hi = two_family ? fan.s.d_star : fan.s.d_star2;
      const auto speed_at = [&](double d) {
        const double lam = lambda_scalar(d, d0, mat);
        return two_family ? -lam : lam;
      };
      // speed_at is increasing in d for the 2-family, decreasing for the 5-family.
      for (int it = 0; it < 200 && std::abs(hi - lo) > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double s = speed_at(mid);
        const bool go_right = two_family ? (s < xi) : (s > xi);
        if (go_right) lo = mid; else hi = mid;
      }
      const double d = 0.5 * (lo + hi);
      const Vec3 oxz = fan.omega.cross(fan.zeta);
      if (two_family) {
        const Vec3 D = fan.s.d0m * fan.omega + d * fan.zeta;
        const Vec3 H = fan.states[1].H + phi66(fan.s.d1, d, fan.s.d0m, mat) * oxz;
        return State66(D, H);
      }
      const Vec3 D = fan.s.d0p * fan.omega + d * fan.zeta;
      const Vec3 H = fan.states[4].H - phi66(fan.s.d2, d, fan.s.d0p, mat) * oxz;
      return State66(D, H);
    }
    // xi >= tail: continue to the next region (ties resolve rightward).
  }
  return fan.states[5];
}

FanCheck validate_fan(const WaveFan66& fan, const MaterialParams& mat) {
  FanCheck chk;
  const double c = mat.c;

  // Speed ordering across the fan.
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& w : fan.waves) {
    if (w.speed_head < prev - 1e-9 * c)
      chk.max_ordering_violation = std::max(chk.max_ordering_violation, prev - w.speed_head);
    if (w.speed_tail < w.speed_head - 1e-12 * c)
      chk.max_ordering_violation =
          std::max(chk.max_ordering_violation, w.speed_head - w.speed_tail);
    prev = w.speed_tail;
  }
  if (fan.waves[2].speed_head != 0.0) {
    chk.ok = false;
    chk.detail += "middle wave not stationary;";
  }

  // Rankine-Hugoniot residuals at discontinuities, normalized against the
  // fan-wide field scales (per-wave jump scales degenerate for near-trivial
  // waves).
  double max_d = 0.0, max_h = 0.0, max_e = 0.0;
  for (const auto& u : fan.states) {
    max_d = std::max(max_d, u.D.cwiseAbs().maxCoeff());
    max_h = std::max(max_h, u.H.cwiseAbs().maxCoeff());
    max_e = std::max(max_e, E_of_D(u.D, mat).cwiseAbs().maxCoeff());
  }
  const double scale_h = c * max_d + max_h + 1e-300;          // A/m
  const double scale_e = c * mat.mu0 * max_h + max_e + 1e-300;  // V/m
  for (int k = 0; k < 5; ++k) {
    const WaveDescriptor& w = fan.waves[k];
    if (w.type == WaveType::rarefaction) continue;
    const State66& ul = fan.states[k];
    const State66& ur = fan.states[k + 1];
    const double sigma = w.speed_head;
    const Vec3 dD = ur.D - ul.D;
    const Vec3 dH = ur.H - ul.H;
    const Vec3 dE = E_of_D(ur.D, mat) - E_of_D(ul.D, mat);
    const Vec3 r1 = sigma * dD + fan.omega.cross(dH);
    const Vec3 r2 = sigma * mat.mu0 * dH - fan.omega.cross(dE);
    chk.max_rh_residual =
        std::max({chk.max_rh_residual, r1.norm() / scale_h, r2.norm() / scale_e});
    if (w.type == WaveType::stationary_contact) {
      const double res_h = fan.omega.cross(dH).norm() / scale_h;
      const double res_e = fan.omega.cross(dE).norm() / scale_e;
      chk.stationary_residual = std::max({chk.stationary_residual, res_h, res_e});
    }
  }

  // Lax inequalities for the 2- and 5-shocks.
  const auto lax_gap = [&](int k) {
    const WaveDescriptor& w = fan.waves[k];
    if (w.type != WaveType::shock) return 0.0;
    const State66& ul = fan.states[k];
    const State66& ur = fan.states[k + 1];
    const Eigenvalues66 el = eigenvalues66(ul.D, fan.omega, mat);
    const Eigenvalues66 er = eigenvalues66(ur.D, fan.omega, mat);
    const double sigma = w.speed_head;
    double gap = 0.0;
    if (k == 1) {  // 2-shock: lambda1(ul) <= sigma <= lambda2(ul), lambda2(ur) <= sigma <= 0
      gap = std::max(gap, (-el.lambda1) - sigma);
      gap = std::max(gap, sigma - (-el.lambda));
      gap = std::max(gap, (-er.lambda) - sigma);
      gap = std::max(gap, sigma - 0.0);
    } else {  // 5-shock: 0 <= sigma <= lambda(ul), lambda(ur) <= sigma <= lambda1(ur)
      gap = std::max(gap, 0.0 - sigma);
      gap = std::max(gap, sigma - el.lambda);
      gap = std::max(gap, er.lambda - sigma);
      gap = std::max(gap, sigma - er.lambda1);
    }
    return gap;
  };
  chk.max_lax_violation = std::max(lax_gap(1), lax_gap(3));

  if (chk.max_rh_residual > 1e-9) {
    chk.ok = false;
    chk.detail += "RH residual;";
  }
  if (chk.max_lax_violation > 1e-9 * c) {
    chk.ok = false;
    chk.detail += "Lax inequality;";
  }
  if (chk.max_ordering_violation > 1e-9 * c) {
    chk.ok = false;
    chk.detail += "speed ordering;";
  }
  if (chk.stationary_residual > 1e-9) {
    chk.ok = false;
    chk.detail += "stationary contact;";
  }
  return chk;
}

void dump_fan_csv(std::ostream& os, const WaveFan66& fan) {
  os << "wave,type,speed_head,speed_tail,"
        "Dl1,Dl2,Dl3,Hl1,Hl2,Hl3,Dr1,Dr2,Dr3,Hr1,Hr2,Hr3\n";
  char buf[64];
  for (int k = 0; k < 5; ++k) {
    const WaveDescriptor& w = fan.waves[k];
    os << k << ',' << wave_type_name(w.type);
    const auto put = [&](double v) {
      std::snprintf(buf, sizeof buf, ",%.16e", v);
      os << buf;
    };
    put(w.speed_head);
    put(w.speed_tail);
    for (int c = 0; c < 6; ++c) put(fan.states[k].component(c));
    for (int c = 0; c < 6; ++c) put(fan.states[k + 1].component(c));
    os << '\n';
  }
}

}  // namespace kerr
