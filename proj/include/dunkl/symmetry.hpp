#ifndef DUNKL_SYMMETRY_HPP_
#define DUNKL_SYMMETRY_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "dunkl/analytic.hpp"
#include "dunkl/common.hpp"

namespace dunkl {

/// Parity pattern eta in {0,1}^n.
class SignVector {
 public:
  explicit SignVector(std::vector<int> bits) : bits_(std::move(bits)) {
    for (int b : bits_)
      if (b != 0 && b != 1) throw DomainError("SignVector: entries must be 0 or 1");
  }
  SignVector(std::initializer_list<int> b) : SignVector(std::vector<int>(b)) {}
  static SignVector zero(std::size_t n) { return SignVector(std::vector<int>(n, 0)); }

  std::size_t dim() const { return bits_.size(); }
  int operator[](std::size_t j) const { return bits_[j]; }
  int total() const {
    int s = 0;
    for (int b : bits_) s += b;
    return s;
  }
  bool operator==(const SignVector& o) const { return bits_ == o.bits_; }
  const std::vector<int>& bits() const { return bits_; }

  /// All 2^n parity patterns in lexicographic order.
  static std::vector<SignVector> all(std::size_t n) {
    std::vector<SignVector> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      std::vector<int> b(n);
      for (std::size_t j = 0; j < n; ++j) b[j] = (mask >> (n - 1 - j)) & 1;
      out.emplace_back(std::move(b));
    }
    return out;
  }

 private:
  std::vector<int> bits_;
};

/// Derivative multi-order M in N^n together with a time order K.
struct MultiOrder {
  std::vector<int> M;
  int K = 0;

  MultiOrder(std::vector<int> m, int k = 0) : M(std::move(m)), K(k) {
    for (int v : M)
      if (v < 0) throw DomainError("MultiOrder: entries must be >= 0");
    if (K < 0) throw DomainError("MultiOrder: K must be >= 0");
  }
  int total_M() const {
    int s = 0;
    for (int v : M) s += v;
    return s;
  }
};

/// Parity of a derivative order M_j.
inline int order_parity(int m) { return m % 2; }

/// epsilon(eta, M) = eta (1 - Mbar) + (1 - eta) Mbar, componentwise in Z_2.
inline SignVector parity_epsilon(const SignVector& eta, const std::vector<int>& M) {
  std::vector<int> e(eta.dim());
  for (std::size_t j = 0; j < eta.dim(); ++j) {
    int mb = order_parity(M[j]);
    e[j] = eta[j] * (1 - mb) + (1 - eta[j]) * mb;
  }
  return SignVector(e);
}

/// C_{M,eta} = (-1)^{sum_j (1-eta_j) Mbar_j + floor(M_j/2)}.
inline double intertwine_constant(const SignVector& eta, const std::vector<int>& M) {
  int s = 0;
  for (std::size_t j = 0; j < eta.dim(); ++j)
    s += (1 - eta[j]) * order_parity(M[j]) + M[j] / 2;
  return (s % 2 == 0) ? 1.0 : -1.0;
}

// ---------------------------------------------------------------------------
// Grids on the positive orthant and their sign-closed doubles
// ---------------------------------------------------------------------------

enum class GridDuty { quadrature, stencil };

struct AxisGrid {
  Vec nodes;    // strictly increasing, all > 0
  Vec weights;  // dw_lambda^+ quadrature weights (x^{2 lambda} folded in)
};

/// Complex samples on a tensor grid of (0,inf)^n with attached dw_lambda^+
/// quadrature weights.
struct GridFunction {
  MultiplicityVector lambda;
  std::vector<AxisGrid> axes;
  CVec values;  // row-major over the tensor grid
  GridDuty duty = GridDuty::quadrature;
  std::vector<std::string> notes;  // stencil warnings etc.

  std::size_t dim() const { return axes.size(); }
  std::vector<std::size_t> dims() const {
    std::vector<std::size_t> d;
    for (const auto& a : axes) d.push_back(a.nodes.size());
    return d;
  }
  std::size_t size() const { return total_size(dims()); }

  Vec point(const std::vector<std::size_t>& idx) const {
    Vec x(dim());
    for (std::size_t j = 0; j < dim(); ++j) x[j] = axes[j].nodes[idx[j]];
    return x;
  }
  double quad_weight(const std::vector<std::size_t>& idx) const {
    double w = 1.0;
    for (std::size_t j = 0; j < dim(); ++j) w *= axes[j].weights[idx[j]];
    return w;
  }
};

/// Gauss-Jacobi grid on (0, xmax]^n per axis, exact for polynomials times the
/// x^{2 lambda} weight: nodes x = xmax (1+s)/2 with Jacobi(0, 2 lambda_j).
inline std::vector<AxisGrid> jacobi_plus_axes(const MultiplicityVector& lambda, double xmax,
                                              std::size_t n_nodes) {
  std::vector<AxisGrid> axes;
  for (std::size_t j = 0; j < lambda.dim(); ++j) {
    QuadratureRule gj = gauss_jacobi(0.0, 2.0 * lambda[j], n_nodes);
    AxisGrid a;
    a.nodes.resize(n_nodes);
    a.weights.resize(n_nodes);
    double scale = std::pow(xmax / 2.0, 2.0 * lambda[j] + 1.0);
    for (std::size_t i = 0; i < n_nodes; ++i) {
      a.nodes[i] = xmax * (1.0 + gj.nodes[i]) / 2.0;
      a.weights[i] = scale * gj.weights[i];
    }
    axes.push_back(std::move(a));
  }
  return axes;
}

/// Midpoint-uniform grid x_k = (k+1/2) h on (0, xmax); its sign-closed double
/// is a uniform grid, which is what the finite-difference stencils expect.
/// Weights are midpoint-rule dw_lambda^+ weights.
inline std::vector<AxisGrid> uniform_plus_axes(const MultiplicityVector& lambda, double xmax,
                                               std::size_t n_nodes) {
  std::vector<AxisGrid> axes;
  double h = xmax / static_cast<double>(n_nodes);
  for (std::size_t j = 0; j < lambda.dim(); ++j) {
    AxisGrid a;
    a.nodes.resize(n_nodes);
    a.weights.resize(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
      a.nodes[i] = (static_cast<double>(i) + 0.5) * h;
      a.weights[i] = h * std::pow(a.nodes[i], 2.0 * lambda[j]);
    }
    axes.push_back(std::move(a));
  }
  return axes;
}

inline GridFunction make_grid_function(const MultiplicityVector& lambda,
                                       std::vector<AxisGrid> axes, GridDuty duty,
                                       const std::function<Complex(const Vec&)>& f) {
  GridFunction g{lambda, std::move(axes), {}, duty, {}};
  g.values.resize(g.size());
  std::vector<std::size_t> idx(g.dim(), 0);
  auto dims = g.dims();
  std::size_t k = 0;
  do {
    g.values[k++] = f(g.point(idx));
  } while (next_multi_index(idx, dims));
  return g;
}

/// Samples on the sign-closed double of a positive grid: per-axis ordering is
/// [-x_N, ..., -x_1, x_1, ..., x_N].
struct SignedGridFunction {
  MultiplicityVector lambda;
  std::vector<Vec> plus_nodes;  // positive half per axis, increasing
  CVec values;                  // row-major over the doubled tensor grid

  std::size_t dim() const { return plus_nodes.size(); }
  std::vector<std::size_t> dims() const {
    std::vector<std::size_t> d;
    for (const auto& a : plus_nodes) d.push_back(2 * a.size());
    return d;
  }
  std::size_t size() const { return total_size(dims()); }

  double node(std::size_t axis, std::size_t i) const {
    std::size_t n = plus_nodes[axis].size();
    return i < n ? -plus_nodes[axis][n - 1 - i] : plus_nodes[axis][i - n];
  }
  Vec point(const std::vector<std::size_t>& idx) const {
    Vec x(dim());
    for (std::size_t j = 0; j < dim(); ++j) x[j] = node(j, idx[j]);
    return x;
  }
  /// Index of the sigma_j reflection of idx along `axis`.
  static std::size_t reflect(std::size_t i, std::size_t n2) { return n2 - 1 - i; }
};

inline SignedGridFunction make_signed_grid_function(const MultiplicityVector& lambda,
                                                    std::vector<Vec> plus_nodes,
                                                    const std::function<Complex(const Vec&)>& f) {
  SignedGridFunction g{lambda, std::move(plus_nodes), {}};
  g.values.resize(g.size());
  auto dims = g.dims();
  std::vector<std::size_t> idx(g.dim(), 0);
  std::size_t k = 0;
  do {
    g.values[k++] = f(g.point(idx));
  } while (next_multi_index(idx, dims));
  return g;
}

// ---------------------------------------------------------------------------
// eta decomposition / extension / restriction
// ---------------------------------------------------------------------------

/// f_eta(x) = 2^{-n} sum_{eps in {-1,1}^n} eps^eta f(eps x), on the same grid.
inline SignedGridFunction eta_component(const SignedGridFunction& f, const SignVector& eta) {
  if (eta.dim() != f.dim()) throw DomainError("eta_component: dimension mismatch");
  SignedGridFunction out = f;
  auto dims = f.dims();
  std::size_t n = f.dim();
  std::vector<std::size_t> idx(n, 0);
  std::size_t k = 0;
  double inv = 1.0 / static_cast<double>(std::size_t{1} << n);
  do {
    Complex acc{0.0, 0.0};
    // iterate over sign patterns
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      std::vector<std::size_t> flipped = idx;
      int sign = 1;
      for (std::size_t j = 0; j < n; ++j) {
        if ((mask >> j) & 1) {
          flipped[j] = SignedGridFunction::reflect(idx[j], dims[j]);
          if (eta[j] == 1) sign = -sign;
        }
      }
      Complex v = f.values[flat_index(flipped, dims)];
      acc += sign > 0 ? v : -v;
    }
    out.values[k++] = inv * acc;
  } while (next_multi_index(idx, dims));
  return out;
}

/// Restriction of a sign-closed sample to the positive orthant.
inline GridFunction restrict_plus(const SignedGridFunction& f, std::vector<AxisGrid> plus_axes,
                                  GridDuty duty = GridDuty::quadrature) {
  GridFunction g{f.lambda, std::move(plus_axes), {}, duty, {}};
  auto pdims = g.dims();
  auto fdims = f.dims();
  g.values.resize(g.size());
  std::vector<std::size_t> idx(g.dim(), 0);
  std::size_t k = 0;
  do {
    std::vector<std::size_t> full = idx;
    for (std::size_t j = 0; j < g.dim(); ++j) full[j] += pdims[j];
    g.values[k++] = f.values[flat_index(full, fdims)];
  } while (next_multi_index(idx, pdims));
  return g;
}

/// f^eta: the eta-symmetric extension of a positive-orthant sample.
inline SignedGridFunction eta_extension(const GridFunction& f, const SignVector& eta) {
  if (eta.dim() != f.dim()) throw DomainError("eta_extension: dimension mismatch");
  SignedGridFunction out{f.lambda, {}, {}};
  for (const auto& a : f.axes) out.plus_nodes.push_back(a.nodes);
  auto fdims = out.dims();
  auto pdims = f.dims();
  out.values.resize(out.size());
  std::vector<std::size_t> idx(f.dim(), 0);
  std::size_t k = 0;
  do {
    Vec x = out.point(idx);
    std::vector<std::size_t> pos(f.dim());
    int sign = 1;
    for (std::size_t j = 0; j < f.dim(); ++j) {
      if (idx[j] < pdims[j]) {
        pos[j] = pdims[j] - 1 - idx[j];
        if (eta[j] == 1) sign = -sign;
      } else {
        pos[j] = idx[j] - pdims[j];
      }
    }
    Complex v = f.values[flat_index(pos, pdims)];
    out.values[k++] = sign > 0 ? v : -v;
  } while (next_multi_index(idx, fdims));
  return out;
}

// ---------------------------------------------------------------------------
// Finite differences (Fornberg weights work on any node layout)
// ---------------------------------------------------------------------------

/// Fornberg weights for the k-th derivative at x0 from nodes xs.
inline Vec fd_weights(double x0, const Vec& xs, int k) {
  std::size_t n = xs.size();
  std::vector<Vec> c(n, Vec(k + 1, 0.0));
  double c1 = 1.0, c4 = xs[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    int mn = std::min<int>(static_cast<int>(i), k);
    double c2 = 1.0, c5 = c4;
    c4 = xs[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int m = mn; m >= 1; --m)
          c[i][m] = c1 * (m * c[i - 1][m - 1] - c5 * c[i - 1][m]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int m = mn; m >= 1; --m) c[j][m] = (c4 * c[j][m] - m * c[j][m - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  Vec w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = c[i][k];
  return w;
}

/// First derivative of a callable by the 4th-order central stencil.
template <typename F>
auto fd_derivative1(const F& f, double x, double h) -> decltype(f(x)) {
  return (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) / (12.0 * h);
}

/// k-th derivative of a callable from a (2m+1)-point central stencil with
/// 4th-order accuracy.
template <typename F>
auto fd_derivative(const F& f, double x, double h, int k) -> decltype(f(x)) {
  int m = (k + 3) / 2 + 1;  // enough points for order-4 accuracy
  Vec xs(2 * m + 1);
  for (int i = -m; i <= m; ++i) xs[i + m] = x + i * h;
  Vec w = fd_weights(x, xs, k);
  decltype(f(x)) acc{};
  for (int i = 0; i <= 2 * m; ++i) acc += w[i] * f(xs[i]);
  return acc;
}

// ---------------------------------------------------------------------------
// Dunkl derivatives
// ---------------------------------------------------------------------------

/// T_j^lambda F at x for a callable F on R^n (finite differences for the
/// partial, exact reflection-difference term).
inline Complex dunkl_derivative_at(const std::function<Complex(const Vec&)>& F,
                                   const MultiplicityVector& lambda, std::size_t j, Vec x,
                                   double h) {
  auto along = [&](double xj) {
    Vec y = x;
    y[j] = xj;
    return F(y);
  };
  Complex d = fd_derivative1(along, x[j], h);
  Vec sx = x;
  sx[j] = -x[j];
  return d + lambda[j] * (F(x) - F(sx)) / x[j];
}

/// Dunkl Laplacian -sum_j (T_j^lambda)^2 F at x by nested finite differences.
/// Nonnegative convention: Delta_lambda psi_z = |z|^2 psi_z.
inline Complex dunkl_laplacian_at(const std::function<Complex(const Vec&)>& F,
                                  const MultiplicityVector& lambda, const Vec& x, double h) {
  Complex acc{0.0, 0.0};
  for (std::size_t j = 0; j < lambda.dim(); ++j) {
    auto tj = [&](const Vec& y) { return dunkl_derivative_at(F, lambda, j, y, h); };
    acc += dunkl_derivative_at(tj, lambda, j, x, h);
  }
  return -acc;
}

/// T_j^lambda on a sign-closed grid sample. Stencil-duty grids (uniform
/// doubled axes) give 4th-order accuracy; warnings note truncated stencils.
inline SignedGridFunction dunkl_derivative(const SignedGridFunction& f,
                                           const MultiplicityVector& lambda, std::size_t j) {
  SignedGridFunction out = f;
  auto dims = f.dims();
  std::size_t n2 = dims[j];
  Vec axis(n2);
  for (std::size_t i = 0; i < n2; ++i) axis[i] = f.node(j, i);

  // per-node stencils along axis j
  const int half = 2;
  std::vector<Vec> wts(n2);
  std::vector<std::size_t> first(n2);
  for (std::size_t i = 0; i < n2; ++i) {
    std::size_t lo = i >= half ? i - half : 0;
    std::size_t hi = std::min(lo + 4, n2 - 1);
    lo = hi >= 4 ? hi - 4 : 0;
    first[i] = lo;
    Vec xs(axis.begin() + lo, axis.begin() + hi + 1);
    wts[i] = fd_weights(axis[i], xs, 1);
  }

  std::vector<std::size_t> idx(f.dim(), 0);
  std::size_t k = 0;
  do {
    Complex d{0.0, 0.0};
    std::size_t i = idx[j];
    for (std::size_t p = 0; p < wts[i].size(); ++p) {
      std::vector<std::size_t> nb = idx;
      nb[j] = first[i] + p;
      d += wts[i][p] * f.values[flat_index(nb, dims)];
    }
    std::vector<std::size_t> ref = idx;
    ref[j] = SignedGridFunction::reflect(idx[j], n2);
    Complex refl = (f.values[k] - f.values[flat_index(ref, dims)]) / axis[i];
    out.values[k] = d + lambda[j] * refl;
    ++k;
  } while (next_multi_index(idx, dims));
  return out;
}

// ---------------------------------------------------------------------------
// delta_{eta, M}
// ---------------------------------------------------------------------------

namespace detail {

/// Sequence of one-dimensional factors for delta_{j, eta_j, M_j}: `true` means
/// delta_j^* (with the 2 lambda / x coefficient), `false` means plain d/dx.
/// Position 0 is applied first (rightmost factor).
inline std::vector<bool> delta_sequence(int eta_j, int m_j) {
  std::vector<bool> seq(m_j);
  for (int p = 0; p < m_j; ++p) {
    bool star_first = (eta_j == 1);
    seq[p] = (p % 2 == 0) ? star_first : !star_first;
  }
  return seq;
}

}  // namespace detail

/// delta_{eta,M} applied to a callable on the positive orthant by nested
/// finite differences; the oracle used to cross-check analytic reductions.
inline Complex delta_eta_M_at(const std::function<Complex(const Vec&)>& F,
                              const MultiplicityVector& lambda, const SignVector& eta,
                              const std::vector<int>& M, const Vec& x, double h) {
  std::function<Complex(const Vec&)> cur = F;
  for (std::size_t j = 0; j < lambda.dim(); ++j) {
    for (bool star : detail::delta_sequence(eta[j], M[j])) {
      auto prev = cur;
      double lam = lambda[j];
      cur = [prev, j, star, lam, h](const Vec& y) {
        auto along = [&](double yj) {
          Vec p = y;
          p[j] = yj;
          return prev(p);
        };
        Complex d = fd_derivative1(along, y[j], h);
        if (star) d += 2.0 * lam / y[j] * prev(y);
        return d;
      };
    }
  }
  return cur(x);
}

/// delta_{eta,M} on a positive-orthant grid sample (stencil-duty grid).
/// Throws when a delta^* factor is requested on a grid reaching below x_min.
inline GridFunction delta_eta_M(const GridFunction& f, const SignVector& eta,
                                const std::vector<int>& M, double x_min = 1e-3) {
  GridFunction out = f;
  auto dims = f.dims();
  for (std::size_t j = 0; j < f.dim(); ++j) {
    auto seq = detail::delta_sequence(eta[j], M[j]);
    bool needs_star = std::any_of(seq.begin(), seq.end(), [](bool b) { return b; });
    if (needs_star && f.axes[j].nodes.front() < x_min)
      throw DomainError("delta_eta_M: grid too close to 0 for the 2 lambda/x coefficient");
    const Vec& axis = f.axes[j].nodes;
    std::size_t nn = axis.size();
    std::vector<Vec> wts(nn);
    std::vector<std::size_t> first(nn);
    for (std::size_t i = 0; i < nn; ++i) {
      std::size_t lo = i >= 2 ? i - 2 : 0;
      std::size_t hi = std::min(lo + 4, nn - 1);
      lo = hi >= 4 ? hi - 4 : 0;
      first[i] = lo;
      Vec xs(axis.begin() + lo, axis.begin() + hi + 1);
      wts[i] = fd_weights(axis[i], xs, 1);
      if (lo + 2 != i) out.notes.push_back("truncated stencil at axis " + std::to_string(j));
    }
    for (bool star : seq) {
      CVec next(out.values.size());
      std::vector<std::size_t> idx(f.dim(), 0);
      std::size_t k = 0;
      do {
        Complex d{0.0, 0.0};
        std::size_t i = idx[j];
        for (std::size_t p = 0; p < wts[i].size(); ++p) {
          std::vector<std::size_t> nb = idx;
          nb[j] = first[i] + p;
          d += wts[i][p] * out.values[flat_index(nb, dims)];
        }
        if (star) d += 2.0 * f.lambda[j] / axis[i] * out.values[k];
        next[k++] = d;
      } while (next_multi_index(idx, dims));
      out.values = std::move(next);
    }
  }
  return out;
}

/// Both sides of the intertwining identity
///   delta_{eta,M,x} [(xz)^eta phi_z^{lambda+eta}(x)]
///     = C_{M,eta} z^M (xz)^epsilon phi_z^{lambda+epsilon}(x),
/// the left side by finite differences, the right side in closed form.
struct IntertwinePair {
  Complex lhs;
  Complex rhs;
};

inline IntertwinePair intertwine_check(const MultiplicityVector& lambda, const SignVector& eta,
                                       const std::vector<int>& M, const Vec& z, const Vec& x) {
  std::size_t n = lambda.dim();
  auto A = [&](const Vec& y) {
    double v = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (eta[j]) v *= y[j] * z[j];
      v *= bessel_j_ratio(lambda[j] + eta[j] - 0.5, y[j] * z[j]);
    }
    return Complex{v, 0.0};
  };
  double zmax = 1.0;
  for (double zj : z) zmax = std::max(zmax, std::abs(zj));
  double h = 0.01 / zmax;
  Complex lhs = delta_eta_M_at(A, lambda, eta, M, x, h);

  SignVector eps = parity_epsilon(eta, M);
  double rhs = intertwine_constant(eta, M);
  for (std::size_t j = 0; j < n; ++j) {
    rhs *= std::pow(z[j], M[j]);
    if (eps[j]) rhs *= x[j] * z[j];
    rhs *= bessel_j_ratio(lambda[j] + eps[j] - 0.5, x[j] * z[j]);
  }
  return {lhs, Complex{rhs, 0.0}};
}

}  // namespace dunkl

#endif  // DUNKL_SYMMETRY_HPP_
