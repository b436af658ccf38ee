#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dunkl/operators.hpp"

using namespace dunkl;
using Catch::Approx;

namespace {

double plus_norm(const GridFunction& f) { return l2_norm_plus(f); }

// || op(x) ||_{L^2(dw^+)} over the grid of `f`, op evaluated pointwise
double operator_l2(const GridFunction& f, const std::function<double(const Vec&)>& op) {
  auto dims = f.dims();
  std::vector<std::size_t> idx(f.dim(), 0);
  Vec vals(f.size(), 0.0);
  std::vector<Vec> pts;
  std::vector<double> wts;
  do {
    pts.push_back(f.point(idx));
    wts.push_back(f.quad_weight(idx));
  } while (next_multi_index(idx, dims));
  parallel_for(pts.size(), [&](std::size_t i) { vals[i] = op(pts[i]); });
  KahanSum s;
  for (std::size_t i = 0; i < pts.size(); ++i) s.add(wts[i] * vals[i] * vals[i]);
  return std::sqrt(s.value());
}

}  // namespace

TEST_CASE("maximal heat operator: classical oracle and reduction identity") {
  // indicator of [1,2] on a midpoint grid aligned with the interval edges
  MultiplicityVector l0{0.0};
  auto axes = uniform_plus_axes(l0, 4.0, 2000);
  auto f = make_grid_function(l0, axes, GridDuty::quadrature, [](const Vec& y) {
    return Complex{(y[0] >= 1.0 && y[0] <= 2.0) ? 1.0 : 0.0, 0.0};
  });
  Vec tg = logspace(1e-4, 1e4, 160);
  for (double x : {0.5, 1.5, 3.0}) {
    double got = maximal_heat(f, SignVector{0}, {x}, tg);
    // oracle: same t-grid, reflected-Gaussian kernel integrated over [1,2]
    QuadratureRule gl = gauss_legendre(200);
    double oracle = 0.0;
    for (double t : tg) {
      KahanSum s;
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        double y = 1.5 + 0.5 * gl.nodes[i];
        double k = 0.5 / std::sqrt(pi * t) *
                   (std::exp(-(x - y) * (x - y) / (4 * t)) +
                    std::exp(-(x + y) * (x + y) / (4 * t)));
        s.add(0.5 * gl.weights[i] * k);
      }
      oracle = std::max(oracle, s.value());
    }
    CHECK(got == Approx(oracle).epsilon(1e-3));
    // sup dominates each slice
    CHECK(got >= heat_apply_at(f, SignVector{0}, 1.0, {x}) - 1e-12);
  }

  // reduction: W_*^{lambda,1,+} f(x) = x W_*^{lambda+1,0,+}(f/y)(x)
  MultiplicityVector l{0.6};
  auto axes_l = jacobi_plus_axes(l, 10.0, 120);
  MultiplicityVector l1{1.6};
  auto axes_l1 = jacobi_plus_axes(l1, 10.0, 120);
  auto bump = [](double y) { return std::exp(-2.0 * (y - 1.5) * (y - 1.5)); };
  auto fb = make_grid_function(l, axes_l, GridDuty::quadrature,
                               [&](const Vec& y) { return Complex{bump(y[0]), 0.0}; });
  auto fb_over_y = make_grid_function(l1, axes_l1, GridDuty::quadrature, [&](const Vec& y) {
    return Complex{bump(y[0]) / y[0], 0.0};
  });
  // t >= 0.05 keeps the kernel width above the grid resolution, so the two
  // quadrature rules integrate the same resolved integrand
  Vec tg2 = logspace(5e-2, 1e2, 120);
  for (double x : {0.4, 1.1, 2.8}) {
    double lhs = maximal_heat(fb, SignVector{1}, {x}, tg2);
    double rhs = x * maximal_heat(fb_over_y, SignVector{0}, {x}, tg2);
    CHECK(lhs == Approx(rhs).epsilon(1e-8));
  }
}

TEST_CASE("g-function exact constants, heat and Poisson, n = 1") {
  MultiplicityVector l{0.7};
  auto axes = jacobi_plus_axes(l, 10.0, 96);
  auto f = make_grid_function(l, axes, GridDuty::quadrature, [](const Vec& x) {
    return Complex{(1.0 + x[0] * x[0]) * std::exp(-x[0] * x[0] / 2.0), 0.0};
  });
  double nf = plus_norm(f);
  Vec tg = logspace(1e-6, 1e6, 200);
  // the g-function of a compact bump has tails past the f grid (large t pushes
  // mass to x ~ sqrt t), so the norm integrates over the wider (0, 70]; the
  // z-grid must then be fine enough that synthesis stays alias-free out there
  auto zax = jacobi_plus_axes(l, 10.0, 320);
  auto xg = make_grid_function(l, jacobi_plus_axes(l, 70.0, 192), GridDuty::quadrature,
                               [](const Vec&) { return Complex{0.0, 0.0}; });
  struct KM {
    int K;
    int M;
  };
  for (const auto& eta : SignVector::all(1)) {
    SpectralData sd = make_spectral(f, eta, zax);
    for (KM km : {KM{1, 0}, KM{2, 0}, KM{0, 1}, KM{0, 2}, KM{1, 1}}) {
      double norm_g = operator_l2(xg, [&](const Vec& x) {
        return g_function(f, sd, km.K, {km.M}, x, tg);
      });
      double want = gamma_fn(2.0 * km.K + km.M) * std::pow(2.0, -(2.0 * km.K + km.M));
      CHECK(norm_g * norm_g / (nf * nf) == Approx(want).epsilon(1e-3));
      // Poisson variant: Gamma(2K+2M) 2^{-(2K+2M)}
      double norm_p = operator_l2(xg, [&](const Vec& x) {
        return g_function(f, sd, km.K, {km.M}, x, tg, Route::spectral, /*poisson=*/true);
      });
      double want_p = gamma_fn(2.0 * (km.K + km.M)) * std::pow(2.0, -2.0 * (km.K + km.M));
      CHECK(norm_p * norm_p / (nf * nf) == Approx(want_p).epsilon(1e-3));
    }
  }
  // invalid spec
  SpectralData sd0 = make_spectral(f, SignVector{0}, axes);
  CHECK_THROWS_AS(g_function(f, sd0, 0, {0}, {1.0}, tg), DomainError);
  // f = 0 -> 0
  GridFunction zero = f;
  for (auto& v : zero.values) v = 0.0;
  SpectralData sdz = make_spectral(zero, SignVector{0}, axes);
  CHECK(g_function(zero, sdz, 1, {0}, {1.0}, tg) == 0.0);
}

TEST_CASE("g-function kernel route agrees with the spectral route") {
  MultiplicityVector l{0.5};
  auto axes = jacobi_plus_axes(l, 10.0, 96);
  auto f = make_grid_function(l, axes, GridDuty::quadrature, [](const Vec& x) {
    return Complex{x[0] * std::exp(-(x[0] - 1.0) * (x[0] - 1.0)), 0.0};
  });
  // the kernel route needs sqrt(t) above the y-grid spacing; 6 decades still
  Vec tg = logspace(4e-2, 4e4, 140);
  for (const auto& eta : SignVector::all(1)) {
    SpectralData sd = make_spectral(f, eta, axes);
    for (Vec x : {Vec{0.8}, Vec{2.2}}) {
      double gs = g_function(f, sd, 1, {0}, x, tg, Route::spectral);
      double gk = g_function(f, sd, 1, {0}, x, tg, Route::kernel);
      CHECK(gk == Approx(gs).epsilon(1e-4));
      double gs2 = g_function(f, sd, 0, {1}, x, tg, Route::spectral);
      double gk2 = g_function(f, sd, 0, {1}, x, tg, Route::kernel);
      CHECK(gk2 == Approx(gs2).epsilon(1e-4));
    }
  }
}

TEST_CASE("Riesz transform: contraction, unit symbol at n=1, route agreement") {
  MultiplicityVector l{0.9};
  auto axes = jacobi_plus_axes(l, 10.0, 96);
  Sampler smp(23);
  // Rf flips parity, so it decays like a Hilbert transform of a bump; the
  // isometry check needs the norm out to (0, 40] and a z-grid fine enough
  // that synthesis stays alias-free there
  auto zax = jacobi_plus_axes(l, 10.0, 192);
  auto norm_axes = jacobi_plus_axes(l, 40.0, 160);
  auto ng = make_grid_function(l, norm_axes, GridDuty::quadrature,
                               [](const Vec&) { return Complex{0.0, 0.0}; });
  for (int rep = 0; rep < 8; ++rep) {
    double a = smp.uniform(0.5, 2.0), c = smp.uniform(0.5, 2.5);
    int p = rep % 3;
    auto f = make_grid_function(l, axes, GridDuty::quadrature, [&](const Vec& x) {
      return Complex{std::pow(x[0], p) * std::exp(-a * (x[0] - c) * (x[0] - c)), 0.0};
    });
    SignVector eta{rep % 2};
    SpectralData sd = make_spectral(f, eta, zax);
    double nf = plus_norm(f);
    double nr = operator_l2(ng, [&](const Vec& x) { return riesz_spectral_at(sd, {1}, x); });
    CHECK(nr / nf <= 1.0 + 1e-3);
    // n = 1: the symbol z/|z| is 1 on the positive spectral grid
    CHECK(nr / nf == Approx(1.0).margin(1e-3));
  }

  // kernel route on a far bump; the spectral route is the oracle, so the bump
  // must be band-limited on the z-grid (spectral width sqrt(2a) well under 10)
  // and x far enough that the excised window holds no mass
  auto fb = make_grid_function(l, axes, GridDuty::quadrature, [](const Vec& y) {
    return Complex{std::exp(-3.0 * (y[0] - 3.0) * (y[0] - 3.0)), 0.0};
  });
  // the oracle's z-grid reaches past the band edge so its own truncation tail
  // (~e^{-z^2/12} at the edge) sits below the comparison tolerance
  auto zob = jacobi_plus_axes(l, 14.0, 160);
  for (const auto& eta : SignVector::all(1)) {
    SpectralData sdb = make_spectral(fb, eta, zob);
    for (Vec x : {Vec{0.3}, Vec{0.8}}) {
      double spectral = riesz_spectral_at(sdb, {1}, x);
      double excised = 0.0;
      double kernel = riesz_kernel_at(fb, eta, {1}, x, 0.5, &excised);
      CHECK(excised <= 0.5);
      CHECK(kernel == Approx(spectral).epsilon(1e-3));
    }
  }
  CHECK_THROWS_AS(riesz_spectral_at(make_spectral(fb, SignVector{0}, axes), {0}, {1.0}),
                  DomainError);
  CHECK_THROWS_AS(riesz_kernel_value(l, SignVector{0}, {1}, {1.0}, {1.0}), DomainError);
}

TEST_CASE("Poisson semigroup: kernel-quadrature vs spectral route") {
  MultiplicityVector l{-0.2};
  // e^{-t|z|} decays slowly in z, so the spectral route needs ghat accurate out
  // to z ~ 30, which in turn needs x-grid spacing below pi/30
  auto axes = jacobi_plus_axes(l, 10.0, 256);
  auto zax = jacobi_plus_axes(l, 30.0, 256);
  auto f = make_grid_function(l, axes, GridDuty::quadrature, [](const Vec& x) {
    return Complex{std::exp(-(x[0] - 1.2) * (x[0] - 1.2)), 0.0};
  });
  for (const auto& eta : SignVector::all(1)) {
    SpectralData sd = make_spectral(f, eta, zax);
    for (double t : {0.3, 1.0, 3.0}) {
      for (double x : {0.7, 1.8}) {
        double kernel_route = poisson_apply_at(f, eta, t, {x});
        double spectral_route = poisson_delta_spectral_at(sd, 0, {0}, t, {x}).real();
        CHECK(kernel_route == Approx(spectral_route).epsilon(1e-4));
      }
    }
  }
}

TEST_CASE("Lusin area integral: zero input, g-equivalence bracket, apertures") {
  MultiplicityVector l{0.4};
  auto axes = jacobi_plus_axes(l, 10.0, 64);
  Vec tg = logspace(1e-6, 1e6, 100);
  auto fz = make_grid_function(l, axes, GridDuty::quadrature,
                               [](const Vec&) { return Complex{0.0, 0.0}; });
  SpectralData sdz = make_spectral(fz, SignVector{0}, axes);
  CHECK(lusin_area(sdz, 1, {0}, ConeSpec{}, {1.0}, tg) == 0.0);
  CHECK_THROWS_AS(lusin_area(sdz, 0, {0}, ConeSpec{}, {1.0}, tg), DomainError);

  // ||S f||_2 / ||g f||_2 stays in a narrow bracket across test functions and
  // apertures beta in {1/2, 1, 2}
  double lo = 1e300, hi = 0.0;
  for (double c : {1.0, 1.8}) {
    auto f = make_grid_function(l, axes, GridDuty::quadrature, [c](const Vec& x) {
      return Complex{std::exp(-(x[0] - c) * (x[0] - c)), 0.0};
    });
    SpectralData sd = make_spectral(f, SignVector{0}, axes);
    double ng = operator_l2(f, [&](const Vec& x) { return g_function(f, sd, 1, {0}, x, tg); });
    for (double beta : {0.5, 1.0, 2.0}) {
      ConeSpec cone{ConeSpec::Shape::parabolic, beta};
      double ns = operator_l2(f, [&](const Vec& x) {
        return lusin_area(sd, 1, {0}, cone, x, tg);
      });
      double ratio = ns / ng;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  CHECK(lo > 0.0);
  CHECK(hi / lo < 4.0);
}

TEST_CASE("full Dunkl apply: classical heat evolution and parity selection") {
  MultiplicityVector l0{0.0};
  auto axes = jacobi_plus_axes(l0, 10.0, 96);
  std::vector<Vec> nodes = {axes[0].nodes};
  double t = 0.5;
  auto F = make_signed_grid_function(l0, nodes, [](const Vec& x) {
    return Complex{std::exp(-(x[0] - 1.0) * (x[0] - 1.0)), 0.0};
  });
  auto heat_op = [&](const GridFunction& g, const SignVector& eta) {
    GridFunction out = g;
    auto dims = g.dims();
    std::vector<std::size_t> idx(1, 0);
    std::size_t k = 0;
    do {
      out.values[k++] = Complex{heat_apply_at(g, eta, t, g.point(idx)), 0.0};
    } while (next_multi_index(idx, dims));
    return out;
  };
  auto evolved = full_dunkl_apply(F, axes, heat_op);
  // classical oracle: heat evolution of e^{-(x-1)^2} on R
  auto dims = evolved.dims();
  std::vector<std::size_t> idx(1, 0);
  std::size_t k = 0;
  double spread = 1.0 + 4.0 * t;
  do {
    double x = evolved.point(idx)[0];
    double want = std::exp(-(x - 1.0) * (x - 1.0) / spread) / std::sqrt(spread);
    CHECK(std::abs(evolved.values[k++] - Complex{want, 0.0}) < 1e-5);
  } while (next_multi_index(idx, dims));

  // symmetric input: only the eta = 0 branch carries mass
  MultiplicityVector l{0.8};
  auto axes_l = jacobi_plus_axes(l, 10.0, 64);
  auto Fs = make_signed_grid_function(l, {axes_l[0].nodes}, [](const Vec& x) {
    return Complex{std::exp(-x[0] * x[0]), 0.0};
  });
  bool odd_called_with_mass = false;
  auto probe_op = [&](const GridFunction& g, const SignVector& eta) {
    double mass = 0.0;
    for (const auto& v : g.values) mass = std::max(mass, std::abs(v));
    if (eta[0] == 1 && mass > 1e-12) odd_called_with_mass = true;
    return g;
  };
  auto same = full_dunkl_apply(Fs, axes_l, probe_op);
  CHECK_FALSE(odd_called_with_mass);
  for (std::size_t i = 0; i < same.values.size(); ++i)
    CHECK(std::abs(same.values[i] - Fs.values[i]) < 1e-13);
}
