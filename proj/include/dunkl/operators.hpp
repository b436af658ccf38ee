#ifndef DUNKL_OPERATORS_HPP_
#define DUNKL_OPERATORS_HPP_

#include <cmath>
#include <functional>
#include <vector>

#include "dunkl/kernels.hpp"
#include "dunkl/transform.hpp"

namespace dunkl {

// ---------------------------------------------------------------------------
// Semigroup evolutions on the positive orthant
// ---------------------------------------------------------------------------

/// W_t^{lambda,eta,+} f(x) by kernel quadrature over f's grid.
inline double heat_apply_at(const GridFunction& f, const SignVector& eta, double t, const Vec& x) {
  HeatKernelParams p{f.lambda, eta, t};
  auto dims = f.dims();
  std::vector<std::size_t> idx(f.dim(), 0);
  KahanSum s;
  std::size_t k = 0;
  do {
    s.add(f.quad_weight(idx) * heat_kernel_product(p, x, f.point(idx)) * f.values[k++].real());
  } while (next_multi_index(idx, dims));
  return s.value();
}

/// P_t^{lambda,eta,+} f(x) by kernel quadrature.
inline double poisson_apply_at(const GridFunction& f, const SignVector& eta, double t,
                               const Vec& x) {
  HeatKernelParams p{f.lambda, eta, t};
  auto dims = f.dims();
  std::vector<std::size_t> idx(f.dim(), 0);
  KahanSum s;
  std::size_t k = 0;
  do {
    s.add(f.quad_weight(idx) * poisson_kernel(p, x, f.point(idx)) * f.values[k++].real());
  } while (next_multi_index(idx, dims));
  return s.value();
}

/// partial_t^K delta_{eta,M} W_t^{lambda,eta,+} f(x): kernel-derivative route.
inline double heat_delta_apply_at(const GridFunction& f, const SignVector& eta, int K,
                                  const std::vector<int>& M, double t, const Vec& x) {
  HeatKernelParams p{f.lambda, eta, t};
  DerivativeSpec spec = DerivativeSpec::none(f.dim());
  spec.K = K;
  spec.M = M;
  auto dims = f.dims();
  std::vector<std::size_t> idx(f.dim(), 0);
  KahanSum s;
  std::size_t k = 0;
  do {
    s.add(f.quad_weight(idx) * kernel_derivative(p, spec, x, f.point(idx)) *
          f.values[k++].real());
  } while (next_multi_index(idx, dims));
  return s.value();
}

// ---------------------------------------------------------------------------
// Spectral route
// ---------------------------------------------------------------------------

/// Precomputed restricted transform of f: everything the spectral formulas need.
struct SpectralData {
  MultiplicityVector lambda;
  SignVector eta;
  std::vector<AxisGrid> z_axes;
  CVec ghat;
};

inline SpectralData make_spectral(const GridFunction& f, const SignVector& eta,
                                  std::vector<AxisGrid> z_axes) {
  SpectralFunction g = transform_plus(f, eta, z_axes);
  return {f.lambda, eta, std::move(z_axes), std::move(g.values)};
}

/// partial_t^K delta_{eta,M} W_t f(x) through the diagonalization:
/// spectral factor (-|z|^2)^K e^{-t |z|^2} against the delta-applied inverse kernel.
inline Complex heat_delta_spectral_at(const SpectralData& sd, int K, const std::vector<int>& M,
                                      double t, const Vec& x) {
  return delta_inverse_at(sd.lambda, sd.z_axes, sd.ghat, sd.eta, M, x, [K, t](double s) {
    return Complex{std::pow(-s, K) * std::exp(-t * s), 0.0};
  });
}

/// Poisson counterpart: factor (-|z|)^K e^{-t |z|}.
inline Complex poisson_delta_spectral_at(const SpectralData& sd, int K, const std::vector<int>& M,
                                         double t, const Vec& x) {
  return delta_inverse_at(sd.lambda, sd.z_axes, sd.ghat, sd.eta, M, x, [K, t](double s) {
    double r = std::sqrt(s);
    return Complex{std::pow(-r, K) * std::exp(-t * r), 0.0};
  });
}

// ---------------------------------------------------------------------------
// Operator families
// ---------------------------------------------------------------------------

/// W_*^{lambda,eta,+} f(x): sup over the discrete t-grid (a lower bound of the
/// true essential sup).
inline double maximal_heat(const GridFunction& f, const SignVector& eta, const Vec& x,
                           const Vec& t_grid) {
  double m = 0.0;
  for (double t : t_grid) m = std::max(m, std::abs(heat_apply_at(f, eta, t, x)));
  return m;
}

inline double maximal_poisson(const GridFunction& f, const SignVector& eta, const Vec& x,
                              const Vec& t_grid) {
  double m = 0.0;
  for (double t : t_grid) m = std::max(m, std::abs(poisson_apply_at(f, eta, t, x)));
  return m;
}

enum class Route { spectral, kernel };

/// g_{K,M}^{lambda,eta,+}(f)(x) = || partial_t^K delta_{eta,M} W_t f(x) ||
/// in L^2(t^{2K+|M|-1} dt); the Poisson variant uses e^{-t|z|} and the power
/// 2K+2|M|-1.
inline double g_function(const GridFunction& f, const SpectralData& sd, int K,
                         const std::vector<int>& M, const Vec& x, const Vec& t_grid,
                         Route route = Route::spectral, bool poisson = false) {
  int mtot = 0;
  for (int m : M) mtot += m;
  if (K + mtot == 0) throw DomainError("g_function: |M| + K must be positive");
  double power = poisson ? 2.0 * K + 2.0 * mtot - 1.0 : 2.0 * K + mtot - 1.0;
  BanachContext ctx = BanachContext::l2(t_grid, power);
  auto F = [&](double t) -> double {
    if (route == Route::spectral)
      return poisson ? poisson_delta_spectral_at(sd, K, M, t, x).real()
                     : heat_delta_spectral_at(sd, K, M, t, x).real();
    return heat_delta_apply_at(f, sd.eta, K, M, t, x);
  };
  return banach_norm_l2t(ctx, F);
}

/// R_M^{lambda,eta,+} f(x), spectral route: symbol z^M/|z|^{|M|} against the
/// delta-applied inverse kernel. `z_min` excises the spectral origin,
/// where the symbol is undefined.
inline double riesz_spectral_at(const SpectralData& sd, const std::vector<int>& M, const Vec& x,
                                double z_min = 1e-3) {
  int mtot = 0;
  for (int m : M) mtot += m;
  if (mtot == 0) throw DomainError("riesz: |M| must be positive");
  double z2min = z_min * z_min;
  return delta_inverse_at(sd.lambda, sd.z_axes, sd.ghat, sd.eta, M, x,
                          [mtot, z2min](double s) {
                            if (s < z2min) return Complex{0.0, 0.0};
                            return Complex{std::pow(s, -0.5 * mtot), 0.0};
                          })
      .real();
}

/// Off-diagonal Riesz kernel R_M(x,y) = (1/Gamma(|M|/2)) int_0^inf
/// delta_{eta,M,x} G_t(x,y) t^{|M|/2-1} dt; log-Gauss on t in
/// [1e-6 d^2, 1e4 d^2], d = |x-y|, where the integrand localizes.
inline double riesz_kernel_value(const MultiplicityVector& lambda, const SignVector& eta,
                                 const std::vector<int>& M, const Vec& x, const Vec& y,
                                 std::size_t t_order = 64) {
  int mtot = 0;
  for (int m : M) mtot += m;
  if (mtot == 0) throw DomainError("riesz: |M| must be positive");
  double d = norm2(vec_sub(x, y));
  if (!(d > 0.0)) throw DomainError("riesz kernel: diagonal evaluation");
  DerivativeSpec spec = DerivativeSpec::none(lambda.dim());
  spec.M = M;
  QuadratureRule gl = gauss_legendre(t_order);
  double lo = std::log(1e-6 * d * d), hi = std::log(1e4 * d * d);
  KahanSum s;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    double lt = lo + (hi - lo) * (gl.nodes[i] + 1.0) / 2.0;
    double t = std::exp(lt);
    HeatKernelParams p{lambda, eta, t};
    s.add(gl.weights[i] * (hi - lo) / 2.0 * kernel_derivative(p, spec, x, y) *
          std::pow(t, 0.5 * mtot));  // t^{|M|/2-1} dt = t^{|M|/2} dlog t
  }
  return s.value() / gamma_fn(0.5 * mtot);
}

/// Kernel-route Riesz transform with principal-value excision of the grid
/// cells within `excision` of x. Reports the radius actually used.
inline double riesz_kernel_at(const GridFunction& f, const SignVector& eta,
                              const std::vector<int>& M, const Vec& x, double excision,
                              double* excised_radius = nullptr) {
  auto dims = f.dims();
  std::vector<std::size_t> idx(f.dim(), 0);
  KahanSum s;
  std::size_t k = 0;
  double used = excision;
  do {
    Vec y = f.point(idx);
    double d = norm2(vec_sub(x, y));
    if (d >= excision) {
      s.add(f.quad_weight(idx) * riesz_kernel_value(f.lambda, eta, M, x, y) *
            f.values[k].real());
    } else {
      used = std::max(used, d);
    }
    ++k;
  } while (next_multi_index(idx, dims));
  if (excised_radius) *excised_radius = used;
  return s.value();
}

/// Lusin area integral S_{K,M}^{lambda,eta,+}(f)(x) over the cone, shifted
/// form with the Xi weight. Heat uses the parabolic cone and power 2K+|M|-1;
/// the Poisson variant conventionally pairs with the straight cone and power
/// 2K+2|M|-1 (caller picks the cone).
inline double lusin_area(const SpectralData& sd, int K, const std::vector<int>& M,
                         const ConeSpec& cone, const Vec& x, const Vec& t_grid,
                         bool poisson = false, std::size_t cone_points = 9) {
  int mtot = 0;
  for (int m : M) mtot += m;
  if (K + mtot == 0) throw DomainError("lusin_area: |M| + K must be positive");
  double power = poisson ? 2.0 * K + 2.0 * mtot - 1.0 : 2.0 * K + mtot - 1.0;
  BanachContext ctx = BanachContext::cone_l2(t_grid, power, cone, cone_points);
  auto F = [&](const Vec& z, double t) -> double {
    Vec xz = vec_add(x, z);
    return poisson ? poisson_delta_spectral_at(sd, K, M, t, xz).real()
                   : heat_delta_spectral_at(sd, K, M, t, xz).real();
  };
  return banach_norm_cone(ctx, sd.lambda, x, F);
}

// ---------------------------------------------------------------------------
// Full Dunkl operators via eta decomposition
// ---------------------------------------------------------------------------

/// Applies a positive-orthant (eta,+) operator to each eta component of F and
/// reassembles; for linear families this is the full Dunkl operator.
inline SignedGridFunction full_dunkl_apply(
    const SignedGridFunction& F, const std::vector<AxisGrid>& axes,
    const std::function<GridFunction(const GridFunction&, const SignVector&)>& op) {
  SignedGridFunction out{F.lambda, F.plus_nodes, {}};
  out.values.assign(F.size(), Complex{0.0, 0.0});
  for (const auto& eta : SignVector::all(F.dim())) {
    auto comp = eta_component(F, eta);
    auto plus = restrict_plus(comp, axes);
    auto applied = op(plus, eta);
    auto ext = eta_extension(applied, eta);
    for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] += ext.values[k];
  }
  return out;
}

}  // namespace dunkl

#endif  // DUNKL_OPERATORS_HPP_
