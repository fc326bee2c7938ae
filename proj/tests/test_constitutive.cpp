#include <doctest.h>

#include <random>

#include "kerr/constitutive.hpp"
#include "oracles.hpp"

using namespace kerr;

namespace {
const MaterialParams mat = MaterialParams::vacuum_kerr(2e-18);

double rel(double a, double b) { return std::abs(a - b) / (std::abs(b) + 1e-300); }
}  // namespace

TEST_CASE("material invariants") {
  CHECK(mat.eps0 == doctest::Approx(8.854187817e-12).epsilon(1e-15));
  CHECK(mat.c == 1.0 / std::sqrt(mat.eps0 * mat.mu0));
  CHECK_THROWS_AS(MaterialParams::make(-1.0, mat.mu0, mat.eps_r), std::invalid_argument);
  CHECK_THROWS_AS(MaterialParams::make(mat.eps0, mat.mu0, 0.0), std::invalid_argument);
}

TEST_CASE("q: odd strictly increasing cubic") {
  CHECK(q_of_e(0.0, mat) == 0.0);
  CHECK(q_of_e(-3.4e9, mat) == -q_of_e(3.4e9, mat));
  // Frozen from an extended-precision evaluation of eps0 (e + eps_r e^3).
  CHECK(rel(q_of_e(3.4e9, mat), 7.26114234496536000e-01) < 1e-15);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1e10, 1e10);
  for (int k = 0; k < 500; ++k) {
    double a = u(rng), b = u(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    CHECK(q_of_e(a, mat) < q_of_e(b, mat));
  }
}

TEST_CASE("p: inverse of q") {
  CHECK(p_of_d(0.0, mat) == 0.0);
  for (double e : {1e3, 1e9, -5e9}) {
    CHECK(rel(p_of_d(q_of_e(e, mat), mat), e) < 1e-12);
  }
  // Frozen from the bisection oracle on q(e) = 0.03 (tol 1e-14).
  CHECK(rel(p_of_d(0.03, mat), 1.05300985853092062e+09) < 1e-13);
  CHECK(rel(p_of_d(0.03, mat), oracle::p_bisect(0.03, mat)) < 1e-13);

  // p o q and q o p are identities across the working range.
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> sgn(-1.0, 1.0);
  std::uniform_real_distribution<double> mag(-10.0, 10.0);
  for (int k = 0; k < 2000; ++k) {
    const double e = std::copysign(std::pow(10.0, mag(rng)), sgn(rng));
    CHECK(rel(p_of_d(q_of_e(e, mat), mat), e) < 1e-12);
    const double d = q_of_e(e, mat);
    CHECK(rel(q_of_e(p_of_d(d, mat), mat), d) < 1e-12);
  }
}

TEST_CASE("E_of_D: parallel field with |E| = p(|D|)") {
  CHECK(E_of_D(Vec3::Zero(), mat) == Vec3::Zero());

  const Vec3 E = E_of_D(Vec3(0.0, 0.03, 0.0), mat);
  CHECK(E[0] == 0.0);
  CHECK(E[2] == 0.0);
  CHECK(rel(E[1], oracle::p_bisect(0.03, mat)) < 1e-13);

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> mag(-6.0, 0.0), dir(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    Vec3 D(dir(rng), dir(rng), dir(rng));
    D = D.normalized() * std::pow(10.0, mag(rng));
    const Vec3 e = E_of_D(D, mat);
    CHECK(rel(e.norm(), p_of_d(D.norm(), mat)) < 1e-12);
    CHECK(e.cross(D).norm() < 1e-12 * e.norm() * D.norm() + 1e-300);
  }
}

TEST_CASE("eigenvalues66") {
  SUBCASE("zero field: both speeds are c") {
    const auto ev = eigenvalues66(Vec3::Zero(), Vec3::UnitX(), mat);
    CHECK(rel(ev.lambda1, mat.c) < 1e-14);
    CHECK(rel(ev.lambda, mat.c) < 1e-14);
  }
  SUBCASE("transverse field: lambda^2 = c^2 / (1 + 3 eps_r e^2)") {
    const Vec3 D(0.0, 0.05, 0.0);
    const double e = p_of_d(0.05, mat);
    const auto ev = eigenvalues66(D, Vec3::UnitX(), mat);
    CHECK(rel(ev.lambda, mat.c / std::sqrt(1.0 + 3.0 * mat.eps_r * e * e)) < 1e-13);
  }
  SUBCASE("rejects non-unit omega") {
    CHECK_THROWS_AS(eigenvalues66(Vec3::Zero(), Vec3(1.0, 1.0, 0.0), mat),
                    std::invalid_argument);
  }
  SUBCASE("ordering lambda <= lambda1, strict iff omega x D != 0") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(-0.08, 0.08), dir(-1.0, 1.0);
    for (int k = 0; k < 300; ++k) {
      const Vec3 D(u(rng), u(rng), u(rng));
      const Vec3 w = Vec3(dir(rng), dir(rng), dir(rng)).normalized();
      const auto ev = eigenvalues66(D, w, mat);
      CHECK(ev.lambda > 0.0);
      CHECK(ev.lambda <= ev.lambda1 * (1.0 + 1e-14));
      if (w.cross(D).norm() > 1e-3 * D.norm()) CHECK(ev.lambda < ev.lambda1);
    }
    const Vec3 w = Vec3(0.3, -0.5, 0.7).normalized();
    const auto ev = eigenvalues66(0.04 * w, w, mat);
    CHECK(rel(ev.lambda, ev.lambda1) < 1e-13);
  }
  SUBCASE("rotation invariance") {
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> u(-0.08, 0.08), ang(-3.0, 3.0);
    for (int k = 0; k < 100; ++k) {
      const Vec3 D(u(rng), u(rng), u(rng));
      const Vec3 w = Vec3(u(rng) + 0.01, u(rng), u(rng)).normalized();
      const Eigen::AngleAxisd rot(ang(rng), Vec3(u(rng), u(rng), u(rng) + 0.05).normalized());
      const auto ev = eigenvalues66(D, w, mat);
      const auto evr = eigenvalues66(rot * D, (rot * w).normalized(), mat);
      CHECK(rel(ev.lambda, evr.lambda) < 1e-12);
      CHECK(rel(ev.lambda1, evr.lambda1) < 1e-12);
    }
  }
}

TEST_CASE("energy_tm") {
  SUBCASE("zero state") {
    const auto en = energy_tm(StateTM{0.0, 0.0, 0.0}, mat);
    CHECK(en.eta == 0.0);
    CHECK(en.Q == Vec2::Zero());
  }
  SUBCASE("pure magnetic state") {
    const double h = 2.5e6;
    const auto en = energy_tm(StateTM{0.0, 0.0, h}, mat);
    CHECK(rel(en.eta, 0.5 * mat.mu0 * h * h) < 1e-14);
    CHECK(en.Q == Vec2::Zero());
  }
  SUBCASE("golden value") {
    // Frozen from the bisection-oracle evaluation of the density formula.
    const auto en = energy_tm(StateTM{0.0, 0.03, 3.0 / mat.mu0}, mat);
    CHECK(rel(en.eta, 2.48192612936949953e+07) < 1e-13);
    CHECK(rel(en.Q[0], 2.51387586164540200e+15) < 1e-13);
    CHECK(en.Q[1] == 0.0);
  }
  SUBCASE("positive away from zero") {
    std::mt19937_64 rng(16);
    std::uniform_real_distribution<double> u(-0.05, 0.05), h(-5e6, 5e6);
    for (int k = 0; k < 200; ++k) {
      const StateTM s{u(rng), u(rng), h(rng)};
      CHECK(energy_tm(s, mat).eta > 0.0);
    }
  }
  SUBCASE("midpoint convexity") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-0.05, 0.05), h(-5e6, 5e6);
    for (int k = 0; k < 300; ++k) {
      const StateTM a{u(rng), u(rng), h(rng)};
      const StateTM b{u(rng), u(rng), h(rng)};
      const StateTM m{0.5 * (a.D1 + b.D1), 0.5 * (a.D2 + b.D2), 0.5 * (a.H3 + b.H3)};
      const double lhs = energy_tm(m, mat).eta;
      const double rhs = 0.5 * (energy_tm(a, mat).eta + energy_tm(b, mat).eta);
      CHECK(lhs <= rhs * (1.0 + 1e-12) + 1e-300);
    }
  }
}
