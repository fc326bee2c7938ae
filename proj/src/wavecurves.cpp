#include "kerr/wavecurves.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "kerr/constitutive.hpp"
#include "kerr/wavecurves_detail.hpp"

namespace kerr {
namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1], center first then outward.
constexpr std::array<double, 8> kGK15Nodes = {
    0.000000000000000e+00, 2.077849550078985e-01, 4.058451513773972e-01,
    5.860872354676911e-01, 7.415311855993944e-01, 8.648644233597691e-01,
    9.491079123427585e-01, 9.914553711208126e-01};
constexpr std::array<double, 8> kGK15Weights = {
    2.094821410847278e-01, 2.044329400752989e-01, 1.903505780647854e-01,
    1.690047266392679e-01, 1.406532597155259e-01, 1.047900103222502e-01,
    6.309209262997855e-02, 2.293532201052922e-02};
// Embedded 7-point Gauss weights (at even Kronrod indices).
constexpr std::array<double, 4> kG7Weights = {
    4.179591836734694e-01, 3.818300505051189e-01, 2.797053914892767e-01,
    1.294849661688697e-01};

// Brent's method on a sign-changing bracket.
template <typename G>
double brent(const G& g, double a, double b, double fa, double fb, double x_tol,
             int max_iter, const char* what) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0))
    throw std::runtime_error(std::string(what) + ": bracket does not change sign");
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol = 2.0 * 2.22e-16 * std::abs(b) + 0.5 * x_tol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;
    if (std::abs(e) < tol || std::abs(fa) <= std::abs(fb)) {
      d = m; e = m;
    } else {
      double p, q2;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q2 = 1.0 - s;
      } else {
        const double q = fa / fc, r = fb / fc;
        p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
        q2 = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q2 = -q2; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q2 - std::abs(tol * q2), std::abs(e * q2))) {
        e = d; d = p / q2;
      } else {
        d = m; e = m;
      }
    }
    a = b; fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
    fb = g(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a; fc = fa; d = b - a; e = d;
    }
  }
  throw std::runtime_error(std::string(what) + ": no convergence");
}

double lambda_sq(double d, double d0, const MaterialParams& mat) {
  return detail::frame_at(d, d0, mat).lambda_sq(mat);
}

}  // namespace

namespace detail {

Frame frame_at(double d, double d0, const MaterialParams& mat) {
  Frame fr;
  fr.e = p_of_d(std::hypot(d, d0), mat);
  const double ee = mat.eps_r * fr.e * fr.e;
  fr.N = 1.0 + ee;
  fr.M = 1.0 + 3.0 * ee;
  fr.e0 = d0 / (mat.eps0 * fr.N);
  return fr;
}

}  // namespace detail

double f_of(double d, double d0, const MaterialParams& mat) {
  return mat.c * mat.c * d / detail::frame_at(d, d0, mat).N;
}

double df_dd(double d, double d0, const MaterialParams& mat) {
  return lambda_sq(std::abs(d), d0, mat);
}

double lambda_scalar(double d, double d0, const MaterialParams& mat) {
  if (d < 0.0) throw std::invalid_argument("lambda_scalar: d must be >= 0");
  return std::sqrt(lambda_sq(d, d0, mat));
}

double S_of(double d_plus, double d_minus, double d0, const MaterialParams& mat) {
  const double prod = (f_of(d_plus, d0, mat) - f_of(d_minus, d0, mat)) * (d_plus - d_minus);
  return std::sqrt(std::max(prod, 0.0));
}

namespace {

// Batched characteristic speed at the 15 Kronrod nodes. The cubic inversion
// is written with exp/log-based primitives so Eigen can vectorize it:
// with u = x + sqrt(x^2 + 1), e = scale (u^{1/3} - u^{-1/3}) reproduces
// 2 scale sinh(asinh(x)/3); one vectorized Newton polish restores full
// precision for tiny arguments.
using Arr15 = Eigen::Array<double, 15, 1>;

void lambda_batch15(const Arr15& s, double d0, const MaterialParams& mat, Arr15& lam) {
  const Arr15 r = (s * s + d0 * d0).sqrt();
  const double a = 1.0 / mat.eps_r;
  const double scale = std::sqrt(a / 3.0);
  const Arr15 x = (1.5 / (mat.eps0 * scale)) * r;
  const Arr15 u = x + (x * x + 1.0).sqrt();
  const Arr15 t = u.pow(1.0 / 3.0);
  Arr15 e = scale * (t - t.inverse());
  const Arr15 q = mat.eps0 * (e + mat.eps_r * e * e * e);
  const Arr15 dq = mat.eps0 * (1.0 + 3.0 * mat.eps_r * e * e);
  e -= (q - r) / dq;
  const Arr15 ee = mat.eps_r * e * e;
  const Arr15 N = 1.0 + ee;
  const Arr15 M = 1.0 + 3.0 * ee;
  const Arr15 e0 = d0 / (mat.eps0 * N);
  lam = mat.c * ((N + 2.0 * mat.eps_r * e0 * e0) / (N * M)).sqrt();
}

void gk15_lambda(double a, double b, double d0, const MaterialParams& mat, double& kronrod,
                 double& err) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  Arr15 nodes;
  nodes[7] = mid;
  for (int i = 1; i < 8; ++i) {
    nodes[7 - i] = mid - half * kGK15Nodes[i];
    nodes[7 + i] = mid + half * kGK15Nodes[i];
  }
  Arr15 fk;
  lambda_batch15(nodes, d0, mat, fk);
  double ik = kGK15Weights[0] * fk[7];
  for (int i = 1; i < 8; ++i) ik += kGK15Weights[i] * (fk[7 - i] + fk[7 + i]);
  double ig = kG7Weights[0] * fk[7];
  for (int i = 1; i < 4; ++i) ig += kG7Weights[i] * (fk[7 - 2 * i] + fk[7 + 2 * i]);
  kronrod = ik * half;
  const double mean = 0.5 * ik;
  double resasc = kGK15Weights[0] * std::abs(fk[7] - mean);
  for (int i = 1; i < 8; ++i)
    resasc += kGK15Weights[i] * (std::abs(fk[7 - i] - mean) + std::abs(fk[7 + i] - mean));
  resasc *= std::abs(half);
  double e = std::abs((ik - ig) * half);
  if (resasc != 0.0 && e != 0.0)
    e = resasc * std::min(1.0, std::pow(200.0 * e / resasc, 1.5));
  err = e;
}

}  // namespace

double R_of(double d1, double d2, double d0, const MaterialParams& mat) {
  if (d1 < 0.0 || d2 < d1) throw std::invalid_argument("R_of: requires 0 <= d1 <= d2");
  if (d1 == d2) return 0.0;
  const double abs_tol = 1e-13 * mat.c * (d2 - d1);
  struct Panel {
    double a, b, value, err;
  };
  std::array<Panel, 64> panels;
  int count = 0;
  double value, err;
  gk15_lambda(d1, d2, d0, mat, value, err);
  panels[count++] = {d1, d2, value, err};
  double total = value;
  double total_err = err;
  while (total_err > std::max(abs_tol, 1e-12 * std::abs(total)) &&
         count < static_cast<int>(panels.size())) {
    int worst = 0;
    for (int i = 1; i < count; ++i)
      if (panels[i].err > panels[worst].err) worst = i;
    const Panel p = panels[worst];
    const double m = 0.5 * (p.a + p.b);
    Panel left{p.a, m, 0.0, 0.0}, right{m, p.b, 0.0, 0.0};
    gk15_lambda(left.a, left.b, d0, mat, left.value, left.err);
    gk15_lambda(right.a, right.b, d0, mat, right.value, right.err);
    total += left.value + right.value - p.value;
    total_err += left.err + right.err - p.err;
    panels[worst] = left;
    panels[count++] = right;
  }
  return total;
}

double phi66(double d1, double d2, double d0, const MaterialParams& mat) {
  if (d2 <= d1) return S_of(d1, d2, d0, mat);
  return -R_of(d1, d2, d0, mat);
}

double dphi66_dd2(double d1, double d2, double d0, const MaterialParams& mat) {
  const double lam2sq = lambda_sq(std::abs(d2), d0, mat);
  if (d1 <= d2) return -std::sqrt(lam2sq);
  const double s = S_of(d1, d2, d0, mat);
  if (s <= 0.0) return -std::sqrt(lam2sq);
  return (f_of(d2, d0, mat) - f_of(d1, d0, mat) - lam2sq * (d1 - d2)) / (2.0 * s);
}

double d_star(double d_minus, double d0, const MaterialParams& mat) {
  if (d_minus == 0.0) return 0.0;
  const double fm = f_of(d_minus, d0, mat);
  // Tangency residual: the secant slope matches df_dd at the root. It carries
  // the sign of d_minus at d = 0 (strict concavity of f on that side) and the
  // opposite sign far out on the other side.
  const auto res = [&](double d) {
    const detail::Frame fr = detail::frame_at(std::abs(d), d0, mat);
    const double f_d = mat.c * mat.c * d / fr.N;
    return fr.lambda_sq(mat) * (d_minus - d) - (fm - f_d);
  };
  const double r0 = res(0.0);
  if (r0 == 0.0) return 0.0;
  const double sgn = d_minus > 0.0 ? 1.0 : -1.0;
  double far = -sgn * std::abs(d_minus);
  double r_far = res(far);
  int grow = 0;
  while (r_far * r0 > 0.0 && grow++ < 400) {
    far *= 2.0;
    r_far = res(far);
  }
  if (r_far * r0 > 0.0) throw std::runtime_error("d_star: failed to bracket tangency point");
  const double x_tol = 1e-14 * std::max(1.0, std::abs(far));
  if (sgn > 0.0) return brent(res, far, 0.0, r_far, r0, x_tol, 200, "d_star");
  return brent(res, 0.0, far, r0, r_far, x_tol, 200, "d_star");
}

double varphi_tm(double d1, double d2, double d0, const MaterialParams& mat) {
  if (d1 == d2) return 0.0;
  if (d1 * d2 >= 0.0 && std::abs(d1) <= std::abs(d2)) {
    const double sgn = d2 > 0.0 ? 1.0 : (d2 < 0.0 ? -1.0 : 0.0);
    return -sgn * R_of(std::abs(d1), std::abs(d2), d0, mat);
  }
  return detail::varphi_tm_cached(d1, d2, d0, d_star(d1, d0, mat), mat);
}

double dvarphi_dd2(double d1, double d2, double d0, const MaterialParams& mat) {
  if (d1 != d2 && d1 * d2 >= 0.0 && std::abs(d1) <= std::abs(d2))
    return -std::sqrt(lambda_sq(std::abs(d2), d0, mat));
  return detail::dvarphi_dd2_cached(d1, d2, d0, d_star(d1, d0, mat), mat);
}

namespace detail {

double varphi_tm_cached(double d1, double d2, double d0, double dstar1,
                        const MaterialParams& mat) {
  if (d1 == d2) return 0.0;
  if (d1 * d2 >= 0.0 && std::abs(d1) <= std::abs(d2)) {
    const double sgn = d2 > 0.0 ? 1.0 : (d2 < 0.0 ? -1.0 : 0.0);
    return -sgn * R_of(std::abs(d1), std::abs(d2), d0, mat);
  }
  const double sgn = d1 > 0.0 ? 1.0 : -1.0;
  if (d2 >= std::min(dstar1, d1) && d2 <= std::max(dstar1, d1))
    return sgn * S_of(d1, d2, d0, mat);
  return sgn * (S_of(d1, dstar1, d0, mat) +
                R_of(std::abs(dstar1), std::abs(d2), d0, mat));
}

double dvarphi_dd2_cached(double d1, double d2, double d0, double dstar1,
                          const MaterialParams& mat) {
  const double lam2sq = lambda_sq(std::abs(d2), d0, mat);
  if (d1 == d2) return -std::sqrt(lam2sq);
  if (d1 * d2 >= 0.0 && std::abs(d1) <= std::abs(d2)) return -std::sqrt(lam2sq);
  if (d2 >= std::min(dstar1, d1) && d2 <= std::max(dstar1, d1)) {
    const double s = S_of(d1, d2, d0, mat);
    if (s <= 0.0) return -std::sqrt(lam2sq);
    const double sgn = d1 > 0.0 ? 1.0 : -1.0;
    const double num = f_of(d2, d0, mat) - f_of(d1, d0, mat) + lam2sq * (d2 - d1);
    return sgn * num / (2.0 * s);
  }
  return -std::sqrt(lam2sq);
}

double transfer_G_guess(double d, double d0_minus, double d0_plus,
                        const MaterialParams& mat, double guess) {
  if (d == 0.0) return 0.0;
  const double target = f_of(d, d0_minus, mat);
  // Safeguarded Newton on the increasing bijection f(., d0_plus).
  double x = guess;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  const double x_tol = 1e-14 * std::max(1.0, std::abs(d));
  for (int it = 0; it < 100; ++it) {
    const Frame fr = frame_at(std::abs(x), d0_plus, mat);
    const double r = mat.c * mat.c * x / fr.N - target;
    if (r > 0.0) hi = std::min(hi, x); else lo = std::max(lo, x);
    const double step = r / fr.lambda_sq(mat);
    double xn = x - step;
    if (!(xn > lo) || !(xn < hi)) {
      if (std::isfinite(lo) && std::isfinite(hi)) xn = 0.5 * (lo + hi);
      else xn = x - (r > 0.0 ? 1.0 : -1.0) * 2.0 * (std::abs(x) + std::abs(d) + 1e-3);
    }
    if (std::abs(xn - x) <= x_tol) return xn;
    x = xn;
  }
  throw std::runtime_error("transfer_G: no convergence");
}

}  // namespace detail

double transfer_G(double d, double d0_minus, double d0_plus, const MaterialParams& mat) {
  return detail::transfer_G_guess(d, d0_minus, d0_plus, mat, d);
}

}  // namespace kerr
