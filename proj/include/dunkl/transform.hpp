#ifndef DUNKL_TRANSFORM_HPP_
#define DUNKL_TRANSFORM_HPP_

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "dunkl/analytic.hpp"
#include "dunkl/common.hpp"
#include "dunkl/symmetry.hpp"

namespace dunkl {

/// Frequency-side samples share the GridFunction carrier.
using SpectralFunction = GridFunction;

inline Complex i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

/// L^2(dw_lambda^+) norm of a quadrature-duty grid sample.
inline double l2_norm_plus(const GridFunction& f) {
  auto dims = f.dims();
  std::vector<std::size_t> idx(f.dim(), 0);
  KahanSum s;
  std::size_t k = 0;
  do {
    s.add(f.quad_weight(idx) * std::norm(f.values[k++]));
  } while (next_multi_index(idx, dims));
  return std::sqrt(s.value());
}

/// L^2(dw_lambda) norm over the sign-closed grid; `axes` supplies the positive
/// half weights (|x|^{2 lambda} is even, so mirrored nodes reuse them).
inline double l2_norm_signed(const SignedGridFunction& f, const std::vector<AxisGrid>& axes) {
  auto dims = f.dims();
  std::vector<std::size_t> idx(f.dim(), 0);
  KahanSum s;
  std::size_t k = 0;
  do {
    double w = 1.0;
    for (std::size_t j = 0; j < f.dim(); ++j) {
      std::size_t n = axes[j].nodes.size();
      std::size_t i = idx[j] < n ? n - 1 - idx[j] : idx[j] - n;
      w *= axes[j].weights[i];
    }
    s.add(w * std::norm(f.values[k++]));
  } while (next_multi_index(idx, dims));
  return std::sqrt(s.value());
}

// ---------------------------------------------------------------------------
// Restricted eta-transform (modified Hankel realization)
// ---------------------------------------------------------------------------

namespace detail {

/// Apply a dense (n_out x n_in) real matrix along one axis of a tensor array.
inline CVec apply_axis_matrix(const CVec& vals, std::vector<std::size_t>& dims, std::size_t axis,
                              std::size_t n_out, const Vec& mat) {
  std::size_t n_in = dims[axis];
  std::size_t inner = 1;
  for (std::size_t j = axis + 1; j < dims.size(); ++j) inner *= dims[j];
  std::size_t outer = vals.size() / (n_in * inner);
  std::vector<std::size_t> out_dims = dims;
  out_dims[axis] = n_out;
  CVec out(outer * n_out * inner, Complex{0.0, 0.0});
  parallel_for(outer, [&](std::size_t o) {
    const Complex* src = vals.data() + o * n_in * inner;
    Complex* dst = out.data() + o * n_out * inner;
    for (std::size_t r = 0; r < n_out; ++r) {
      const double* row = mat.data() + r * n_in;
      for (std::size_t c = 0; c < n_in; ++c) {
        double m = row[c];
        if (m == 0.0) continue;
        const Complex* s = src + c * inner;
        Complex* d = dst + r * inner;
        for (std::size_t p = 0; p < inner; ++p) d[p] += m * s[p];
      }
    }
  });
  dims = out_dims;
  return out;
}

}  // namespace detail

/// (D_lambda f^eta)^+ realized directly on the positive orthant:
///   g(z) = (-i)^{|eta|} int (xz)^eta phi_z^{lambda+eta}(x) f(x) dw_lambda^+(x).
/// `inverse` flips the parity phase to (+i)^{|eta|}; the real Hankel part is an
/// involution on L^2(dw_lambda^+).
inline SpectralFunction transform_plus(const GridFunction& f, const SignVector& eta,
                                       std::vector<AxisGrid> z_axes, bool inverse = false) {
  if (eta.dim() != f.dim()) throw DomainError("transform_plus: dimension mismatch");
  CVec vals = f.values;
  auto dims = f.dims();
  for (std::size_t j = 0; j < f.dim(); ++j) {
    const Vec& xs = f.axes[j].nodes;
    const Vec& ws = f.axes[j].weights;
    const Vec& zs = z_axes[j].nodes;
    double nu = f.lambda[j] + eta[j] - 0.5;
    Vec mat(zs.size() * xs.size());
    parallel_for(zs.size(), [&](std::size_t r) {
      for (std::size_t c = 0; c < xs.size(); ++c) {
        double w = zs[r] * xs[c];
        double k = bessel_j_ratio(nu, w);
        if (eta[j]) k *= w;
        mat[r * xs.size() + c] = k * ws[c];
      }
    });
    vals = detail::apply_axis_matrix(vals, dims, j, zs.size(), mat);
  }
  Complex phase = i_power(inverse ? eta.total() : -eta.total());
  for (auto& v : vals) v *= phase;
  SpectralFunction g{f.lambda, std::move(z_axes), std::move(vals), GridDuty::quadrature, {}};
  return g;
}

// ---------------------------------------------------------------------------
// Full Dunkl transform on sign-closed grids
// ---------------------------------------------------------------------------

/// D_lambda f(z) = 2^{-n} int conj(psi_z^lambda) f dw_lambda, realized as the
/// eta-decomposition into restricted transforms. `x_axes` carries the
/// dw_lambda^+ weights of f's positive half-grid.
inline SignedGridFunction dunkl_forward(const SignedGridFunction& f,
                                        const std::vector<AxisGrid>& x_axes,
                                        const std::vector<AxisGrid>& z_axes,
                                        bool inverse = false) {
  if (x_axes.size() != f.dim()) throw DomainError("dunkl_forward: axes dimension mismatch");
  SignedGridFunction out{f.lambda, {}, {}};
  for (const auto& a : z_axes) out.plus_nodes.push_back(a.nodes);
  out.values.assign(out.size(), Complex{0.0, 0.0});
  for (const auto& eta : SignVector::all(f.dim())) {
    auto comp = eta_component(f, eta);
    auto plus = restrict_plus(comp, x_axes);
    auto ghat = transform_plus(plus, eta, z_axes, inverse);
    auto ext = eta_extension(ghat, eta);
    for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] += ext.values[k];
  }
  return out;
}

/// Inverse transform: D-check_lambda g(x) = D_lambda g(-x).
inline SignedGridFunction dunkl_inverse(const SignedGridFunction& g,
                                        const std::vector<AxisGrid>& z_axes,
                                        const std::vector<AxisGrid>& x_axes) {
  return dunkl_forward(g, z_axes, x_axes, /*inverse=*/true);
}

// ---------------------------------------------------------------------------
// Multipliers
// ---------------------------------------------------------------------------

/// Spectral multiplier m(|z|): an explicit symbol, a Laplace transform
/// m(z) = |z|^2 int_0^inf e^{-t |z|^2} Phi(t) dt, or a finite Laplace-Stieltjes
/// atom list m(z) = sum_k c_k e^{-t_k |z|^2}.
class Multiplier {
 public:
  static Multiplier laplace(std::function<Complex(double)> phi, double sup_bound) {
    if (!(sup_bound >= 0.0) || !std::isfinite(sup_bound))
      throw DomainError("Multiplier: Phi must carry a finite sup bound");
    Multiplier m;
    m.kind_ = Kind::laplace_transform;
    m.phi_ = std::move(phi);
    m.sup_ = sup_bound;
    m.log_rule_ = gauss_legendre(128);
    return m;
  }

  static Multiplier stieltjes(std::vector<std::pair<double, Complex>> atoms) {
    if (atoms.size() > 64) throw DomainError("Multiplier: at most 64 Stieltjes atoms");
    double mass = 0.0;
    for (const auto& [t, c] : atoms) {
      if (!(t > 0.0)) throw DomainError("Multiplier: atom positions must be positive");
      mass += std::abs(c);
    }
    if (!std::isfinite(mass)) throw DomainError("Multiplier: atom masses must be summable");
    Multiplier m;
    m.kind_ = Kind::laplace_stieltjes;
    m.atoms_ = std::move(atoms);
    return m;
  }

  static Multiplier symbol(std::function<Complex(double)> m_of_abs_z) {
    Multiplier m;
    m.kind_ = Kind::explicit_symbol;
    m.symbol_ = std::move(m_of_abs_z);
    return m;
  }

  /// m at |z| = z_norm.
  Complex value(double z_norm) const {
    double s = z_norm * z_norm;
    switch (kind_) {
      case Kind::explicit_symbol:
        return symbol_(z_norm);
      case Kind::laplace_stieltjes: {
        Complex acc{0.0, 0.0};
        for (const auto& [t, c] : atoms_) acc += c * std::exp(-t * s);
        return acc;
      }
      case Kind::laplace_transform: {
        if (s == 0.0) return {0.0, 0.0};
        // u = t |z|^2; m = int e^{-u} Phi(u/|z|^2) du on a log grid.
        const double lo = std::log(1e-8), hi = std::log(1e4);
        Complex acc{0.0, 0.0};
        for (std::size_t i = 0; i < log_rule_.nodes.size(); ++i) {
          double v = lo + (hi - lo) * (log_rule_.nodes[i] + 1.0) / 2.0;
          double u = std::exp(v);
          acc += log_rule_.weights[i] * (hi - lo) / 2.0 * std::exp(-u) * u * phi_(u / s);
        }
        return acc;
      }
    }
    return {0.0, 0.0};
  }

 private:
  enum class Kind { laplace_transform, laplace_stieltjes, explicit_symbol };
  Multiplier() = default;

  Kind kind_ = Kind::explicit_symbol;
  std::function<Complex(double)> phi_;
  double sup_ = 0.0;
  QuadratureRule log_rule_;
  std::vector<std::pair<double, Complex>> atoms_;
  std::function<Complex(double)> symbol_;
};

/// M_m^{lambda,eta,+} f = (inverse of m times the forward transform of f^eta)^+;
/// the spectral sandwich on the positive orthant.
inline GridFunction apply_multiplier(const GridFunction& f, const Multiplier& m,
                                     const SignVector& eta, const std::vector<AxisGrid>& z_axes) {
  SpectralFunction ghat = transform_plus(f, eta, z_axes, /*inverse=*/false);
  auto dims = ghat.dims();
  std::vector<std::size_t> idx(ghat.dim(), 0);
  std::size_t k = 0;
  do {
    Vec z = ghat.point(idx);
    ghat.values[k++] *= m.value(norm2(z));
  } while (next_multi_index(idx, dims));
  return transform_plus(ghat, eta, f.axes, /*inverse=*/true);
}

// ---------------------------------------------------------------------------
// Pointwise spectral synthesis with delta-applied inverse kernels
// ---------------------------------------------------------------------------

/// sum over the z grid of
///   factor(|z|^2) * i^{|eta|} C_{M,eta} z^M (xz)^eps phi_z^{lambda+eps}(x) * ghat(z),
/// the pointwise inverse transform after applying delta_{eta,M} under the
/// integral. With M = 0 and factor = 1 this is the plain inverse at x.
inline Complex delta_inverse_at(const MultiplicityVector& lambda,
                                const std::vector<AxisGrid>& z_axes, const CVec& ghat,
                                const SignVector& eta, const std::vector<int>& M, const Vec& x,
                                const std::function<Complex(double)>& factor) {
  std::size_t n = lambda.dim();
  SignVector eps = parity_epsilon(eta, M);
  double cme = intertwine_constant(eta, M);
  Complex phase = i_power(eta.total()) * cme;

  std::vector<std::size_t> dims;
  for (const auto& a : z_axes) dims.push_back(a.nodes.size());
  std::vector<std::size_t> idx(n, 0);
  Complex acc{0.0, 0.0};
  std::size_t k = 0;
  do {
    double kern = 1.0, w = 1.0, s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double z = z_axes[j].nodes[idx[j]];
      w *= z_axes[j].weights[idx[j]];
      s += z * z;
      double xz = x[j] * z;
      kern *= std::pow(z, M[j]);
      if (eps[j]) kern *= xz;
      kern *= bessel_j_ratio(lambda[j] + eps[j] - 0.5, xz);
    }
    acc += w * kern * factor(s) * ghat[k++];
  } while (next_multi_index(idx, dims));
  return phase * acc;
}

}  // namespace dunkl

#endif  // DUNKL_TRANSFORM_HPP_
