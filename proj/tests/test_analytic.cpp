#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "dunkl/analytic.hpp"

using namespace dunkl;
using Catch::Approx;

namespace {

// Independent 60-term Taylor oracles, kept deliberately naive.
long double i_ratio_series(double nu, double w) {
  long double term = 1.0L / (powl(2.0L, (long double)nu) * tgammal((long double)nu + 1.0L));
  long double sum = term;
  long double q = (long double)w * w / 4.0L;
  for (int m = 1; m <= 60; ++m) {
    term *= q / ((long double)m * ((long double)m + (long double)nu));
    sum += term;
  }
  return sum;
}

long double j_ratio_series(double nu, double w) {
  long double term = 1.0L / (powl(2.0L, (long double)nu) * tgammal((long double)nu + 1.0L));
  long double sum = term;
  long double q = (long double)w * w / 4.0L;
  for (int m = 1; m <= 60; ++m) {
    term *= -q / ((long double)m * ((long double)m + (long double)nu));
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("modified Bessel ratio: closed forms and series agreement") {
  const double s2pi = std::sqrt(2.0 / pi);
  CHECK(bessel_i_ratio(-0.5, 0.0) == Approx(s2pi).epsilon(1e-14));
  CHECK(bessel_i_ratio(-0.5, 1.0) == Approx(s2pi * std::cosh(1.0)).epsilon(1e-13));
  CHECK(bessel_i_ratio(0.5, 2.0) == Approx(s2pi * std::sinh(2.0) / 2.0).epsilon(1e-13));

  for (double nu : {-0.9, -0.5, -0.1, 0.0, 0.7, 1.5, 3.2}) {
    for (double w : {0.0, 0.3, 1.0, 2.5, 5.0, 8.0, 10.0}) {
      double ref = (double)(i_ratio_series(nu, w));
      CHECK(bessel_i_ratio(nu, w) == Approx(ref).epsilon(1e-12));
    }
  }
  // scaled form stays finite where the plain ratio overflows
  CHECK(std::isfinite(bessel_i_ratio_scaled(0.3, 1e6)));
  CHECK(bessel_i_ratio_scaled(0.3, 1e6) > 0.0);
}

TEST_CASE("Bessel J ratio: closed forms at nu = +-1/2 over [0,50]") {
  const double s2pi = std::sqrt(2.0 / pi);
  for (double w = 0.25; w <= 50.0; w += 0.83) {
    CHECK(bessel_j_ratio(-0.5, w) ==
          Approx(s2pi * std::cos(w)).margin(1e-12 * s2pi));
    CHECK(bessel_j_ratio(0.5, w) == Approx(s2pi * std::sin(w) / w).margin(1e-12 * s2pi));
  }
  // even in w
  CHECK(bessel_j_ratio(0.8, -3.7) == bessel_j_ratio(0.8, 3.7));
  for (double nu : {-0.9, -0.3, 0.0, 1.1, 2.6}) {
    for (double w : {0.1, 1.0, 4.0, 7.5, 10.0}) {
      double ref = (double)(j_ratio_series(nu, w));
      CHECK(bessel_j_ratio(nu, w) == Approx(ref).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(bessel_j_ratio(-1.5, 1.0), DomainError);
  CHECK_THROWS_AS(bessel_i_ratio(-1.0, 1.0), DomainError);
}

TEST_CASE("phi: closed forms, tensorization, envelope bound") {
  const double s2pi = std::sqrt(2.0 / pi);
  MultiplicityVector l0{0.0};
  for (double x : {0.3, 1.0, 2.2}) {
    for (double z : {0.5, 1.7}) {
      CHECK(phi(l0, {z}, {x}) == Approx(s2pi * std::cos(x * z)).epsilon(1e-12));
    }
  }
  // z = 0 reduces to the first series term
  MultiplicityVector l{0.4, 1.3};
  double expect = 1.0;
  for (double lam : {0.4, 1.3})
    expect *= 1.0 / (std::pow(2.0, lam - 0.5) * gamma_fn(lam + 0.5));
  CHECK(phi(l, {0.0, 0.0}, {1.0, 2.0}) == Approx(expect).epsilon(1e-13));

  // lambda = 1/2 gives plain J_0
  double j0 = (double)j_ratio_series(0.0, 1.0);
  CHECK(phi(MultiplicityVector{0.5}, {1.0}, {1.0}) == Approx(j0).epsilon(1e-12));

  // estvarphi: |phi| <= C min(1, |xz|^{-lambda}) with one fitted C over a
  // 10^4-point sample
  for (double lam : {-0.3, 0.2, 1.7}) {
    Sampler smp(17);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      double x = smp.log_uniform(1e-2, 1e2);
      double z = smp.log_uniform(1e-2, 1e2);
      double v = std::abs(bessel_j_ratio(lam - 0.5, x * z));
      worst = std::max(worst, v / phi_envelope(lam, x * z));
    }
    CHECK(worst < 10.0);
  }
}

TEST_CASE("psi: Euler formula at lambda 0, conjugation symmetry") {
  const double s2pi = std::sqrt(2.0 / pi);
  MultiplicityVector l0{0.0};
  Complex p = psi(l0, {1.3}, {0.7});
  Complex e = s2pi * std::exp(Complex(0.0, 1.3 * 0.7));
  CHECK(std::abs(p - e) < 1e-12);

  MultiplicityVector l2{0.0, 0.0};
  Complex p2 = psi(l2, {0.4, -1.1}, {2.0, 0.3});
  Complex e2 = (2.0 / pi) * std::exp(Complex(0.0, 0.4 * 2.0 - 1.1 * 0.3));
  CHECK(std::abs(p2 - e2) < 1e-12);

  MultiplicityVector l{0.6, -0.2};
  Complex a = psi(l, {-0.9, -1.4}, {0.5, 2.0});
  Complex b = std::conj(psi(l, {0.9, 1.4}, {0.5, 2.0}));
  CHECK(std::abs(a - b) == 0.0);

  // z = 0: purely real, equals phi
  Complex c = psi(l, {0.0, 0.0}, {0.5, 2.0});
  CHECK(c.imag() == 0.0);
  CHECK(c.real() == Approx(phi(l, {0.0, 0.0}, {0.5, 2.0})));
}

TEST_CASE("weight density") {
  CHECK(weight_density(MultiplicityVector{0.0}, {5.0}) == 1.0);
  CHECK(weight_density(MultiplicityVector{1.0}, {2.0}) == 4.0);
  CHECK(weight_density(MultiplicityVector{-0.25}, {4.0}) == Approx(0.5));
  CHECK(std::isinf(weight_density(MultiplicityVector{-0.25}, {0.0})));
  CHECK(weight_density(MultiplicityVector{0.3}, {0.0}) == 0.0);
}

TEST_CASE("ball volume") {
  // Lebesgue cube at lambda = 0
  MultiplicityVector l0{0.0, 0.0};
  CHECK(ball_volume_plus(l0, {5.0, 7.0}, 1.5) == Approx(std::pow(3.0, 2)));
  // x -> 0 branch
  double lam = 0.7, t = 0.9;
  CHECK(ball_volume_plus_1d(lam, 1e-14, t) ==
        Approx(std::pow(t, 2 * lam + 1) / (2 * lam + 1)).epsilon(1e-10));
  // by-hand value
  CHECK(ball_volume_plus_1d(0.5, 3.0, 1.0) == Approx(6.0));
  CHECK_THROWS_AS(ball_volume_plus_1d(0.5, 3.0, -1.0), DomainError);

  // comparability with t^n prod (x_j + t)^{2 lambda_j} over 6 decades
  MultiplicityVector l{-0.3, 1.7};
  Sampler smp(3);
  double lo = 1e300, hi = 0.0;
  for (int i = 0; i < 4000; ++i) {
    Vec x = {smp.log_uniform(1e-3, 1e3), smp.log_uniform(1e-3, 1e3)};
    double t = smp.log_uniform(1e-3, 1e3);
    double ref = t * t;
    for (int j = 0; j < 2; ++j) ref *= std::pow(x[j] + t, 2.0 * l[j]);
    double r = ball_volume_plus(l, x, t) / ref;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(hi / lo < 50.0);
  CHECK(lo > 0.0);
}

TEST_CASE("Gauss-Jacobi and Omega rules") {
  // Legendre sanity
  QuadratureRule gl = gauss_legendre(8);
  double m0 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    m0 += gl.weights[i];
    m2 += gl.weights[i] * gl.nodes[i] * gl.nodes[i];
  }
  CHECK(m0 == Approx(2.0).epsilon(1e-13));
  CHECK(m2 == Approx(2.0 / 3.0).epsilon(1e-13));

  // Omega total masses
  for (double nu : {0.5, 1.0, 0.2, 2.7}) {
    OmegaRule r = omega_rule({nu}, 24);
    double mass = 0.0;
    for (double w : r.axis_weights[0]) mass += w;
    CHECK(mass == Approx(omega_total_mass(nu)).epsilon(1e-12));
  }
  CHECK(omega_total_mass(0.5) == Approx(1.0));
  CHECK(omega_total_mass(1.0) == Approx(std::sqrt(2.0 / pi)));

  // Odd moments vanish; even moments match the Beta-integral oracle
  for (double nu : {0.3, 1.4}) {
    OmegaRule r = omega_rule({nu}, 16);
    for (int k = 0; 2 * k <= 2 * 16 - 2; ++k) {
      double mk = 0.0, modd = 0.0;
      for (std::size_t i = 0; i < r.axis_nodes[0].size(); ++i) {
        mk += r.axis_weights[0][i] * std::pow(r.axis_nodes[0][i], 2 * k);
        modd += r.axis_weights[0][i] * std::pow(r.axis_nodes[0][i], 2 * k + 1);
      }
      double oracle = gamma_fn(k + 0.5) /
                      (std::sqrt(pi) * std::pow(2.0, nu - 0.5) * gamma_fn(k + nu + 0.5));
      CHECK(mk == Approx(oracle).epsilon(1e-12));
      CHECK(std::abs(modd) < 1e-14);
    }
  }
  CHECK_THROWS_AS(omega_rule({-0.1}, 8), DomainError);
}

TEST_CASE("q form") {
  CHECK(q_form({2.0}, {3.0}, {-1.0}) == Approx(1.0));
  CHECK(q_form({2.0}, {3.0}, {1.0}) == Approx(25.0));
  CHECK(q_form({1.0, 2.0}, {3.0, 4.0}, {0.0, 0.0}) == Approx(30.0));
  CHECK_THROWS_AS(q_form({1.0}, {1.0}, {1.5}), DomainError);

  // lower bound q >= |x-y|^2 on random samples
  Sampler smp(11);
  for (int i = 0; i < 2000; ++i) {
    Vec x = {smp.log_uniform(1e-2, 1e2), smp.log_uniform(1e-2, 1e2)};
    Vec y = {smp.log_uniform(1e-2, 1e2), smp.log_uniform(1e-2, 1e2)};
    Vec s = {smp.uniform(-1.0, 1.0), smp.uniform(-1.0, 1.0)};
    double d = norm2(vec_sub(x, y));
    CHECK(q_form(x, y, s) >= d * d * (1.0 - 1e-12));
  }
}

TEST_CASE("Xi") {
  MultiplicityVector l0{0.0};
  // numerator is 1: independent of z
  double a = xi(l0, {2.0}, {0.3}, 0.5);
  double b = xi(l0, {2.0}, {-0.4}, 0.5);
  CHECK(a == Approx(b));
  // (x+z)^{2 lambda} / V_1^{1/2,+}(3) = 3 / 6
  CHECK(xi(MultiplicityVector{0.5}, {3.0}, {0.0}, 1.0) == Approx(0.5));
  CHECK_THROWS_AS(xi(MultiplicityVector{0.5}, {1.0}, {-2.0}, 1.0), DomainError);
}
