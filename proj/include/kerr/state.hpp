#ifndef KERR_STATE_HPP
#define KERR_STATE_HPP

#include <Eigen/Dense>

namespace kerr {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

/// Conserved state of the 6x6 Kerr system: electric displacement D (C/m^2)
/// and magnetic field H (A/m).
struct State66 {
  Vec3 D{Vec3::Zero()};
  Vec3 H{Vec3::Zero()};

  State66() = default;
  State66(const Vec3& d, const Vec3& h) : D(d), H(h) {}

  State66& operator+=(const State66& o) { D += o.D; H += o.H; return *this; }
  State66& operator-=(const State66& o) { D -= o.D; H -= o.H; return *this; }
  State66& operator*=(double a) { D *= a; H *= a; return *this; }

  friend State66 operator+(State66 a, const State66& b) { return a += b; }
  friend State66 operator-(State66 a, const State66& b) { return a -= b; }
  friend State66 operator*(double a, State66 u) { return u *= a; }
  friend State66 operator*(State66 u, double a) { return u *= a; }

  bool allFinite() const { return D.allFinite() && H.allFinite(); }
  double maxAbs() const {
    return std::max(D.cwiseAbs().maxCoeff(), H.cwiseAbs().maxCoeff());
  }

  double& component(int k) { return k < 3 ? D[k] : H[k - 3]; }
  double component(int k) const { return k < 3 ? D[k] : H[k - 3]; }
};

/// A flux has the same six components as a state.
using Flux66 = State66;

/// Transverse Magnetic reduction: D = (D1, D2, 0), H = (0, 0, H3).
struct StateTM {
  double D1 = 0.0;  // C/m^2
  double D2 = 0.0;  // C/m^2
  double H3 = 0.0;  // A/m

  Vec2 D() const { return Vec2(D1, D2); }

  friend StateTM operator-(const StateTM& a, const StateTM& b) {
    return StateTM{a.D1 - b.D1, a.D2 - b.D2, a.H3 - b.H3};
  }
};

/// Kerr-Debye state: (D, H) plus the susceptibility chi.
struct StateKD {
  State66 u;
  double chi = 0.0;
};

inline StateTM to_tm(const State66& u) { return StateTM{u.D[0], u.D[1], u.H[2]}; }

inline State66 from_tm(const StateTM& u) {
  return State66(Vec3(u.D1, u.D2, 0.0), Vec3(0.0, 0.0, u.H3));
}

/// True when the full-vector state lies in the TM subspace up to `tol`
/// relative to the state magnitude.
inline bool is_tm(const State66& u, double tol = 1e-12) {
  const double scale = u.maxAbs() + 1e-300;
  return std::abs(u.D[2]) <= tol * scale && std::abs(u.H[0]) <= tol * scale &&
         std::abs(u.H[1]) <= tol * scale;
}

}  // namespace kerr

#endif  // KERR_STATE_HPP
