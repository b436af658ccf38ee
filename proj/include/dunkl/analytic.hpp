#ifndef DUNKL_ANALYTIC_HPP_
#define DUNKL_ANALYTIC_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "dunkl/common.hpp"

namespace dunkl {

/// Multiplicity vector: one exponent per axis, each > -1/2.
class MultiplicityVector {
 public:
  explicit MultiplicityVector(Vec lambda) : lambda_(std::move(lambda)) {
    if (lambda_.empty()) throw DomainError("MultiplicityVector: dimension must be >= 1");
    for (double l : lambda_)
      if (!(l > -0.5)) throw DomainError("MultiplicityVector: entries must be > -1/2");
  }
  MultiplicityVector(std::initializer_list<double> l) : MultiplicityVector(Vec(l)) {}

  std::size_t dim() const { return lambda_.size(); }
  double operator[](std::size_t j) const { return lambda_[j]; }
  const Vec& entries() const { return lambda_; }
  double total() const { return std::accumulate(lambda_.begin(), lambda_.end(), 0.0); }

 private:
  Vec lambda_;
};

inline double gamma_fn(double x) { return std::tgamma(x); }

namespace detail {

// a_k(nu) from the Hankel asymptotic expansions:
// a_0 = 1, a_k = a_{k-1} * (4 nu^2 - (2k-1)^2) / (8 k).
inline double hankel_coeff_step(double nu, int k, double prev) {
  double odd = 2.0 * k - 1.0;
  return prev * (4.0 * nu * nu - odd * odd) / (8.0 * k);
}

inline constexpr double kBesselSeriesCrossover = 14.0;

}  // namespace detail

/// exp(-w) * I_nu(w) / w^nu, the exponentially scaled entire ratio.
/// Finite and positive for all w >= 0, nu > -1.
inline double bessel_i_ratio_scaled(double nu, double w) {
  if (!(nu > -1.0)) throw DomainError("bessel_i_ratio: order must be > -1");
  if (w < 0.0) throw DomainError("bessel_i_ratio: argument must be >= 0");
  if (w < detail::kBesselSeriesCrossover) {
    // All-positive power series; no cancellation.
    long double term = 1.0L / (std::pow(2.0L, (long double)nu) * (long double)gamma_fn(nu + 1.0));
    long double sum = term;
    long double q = (long double)w * w / 4.0L;
    for (int m = 1; m < 120; ++m) {
      term *= q / ((long double)m * ((long double)m + nu));
      sum += term;
      if (term < sum * 1e-20L) break;
    }
    return (double)sum * std::exp(-w);
  }
  // Large-argument expansion, both exponential branches retained.
  double a = 1.0, p = 1.0, m = 1.0;
  double prev = std::numeric_limits<double>::max();
  for (int k = 1; k <= 40; ++k) {
    a = detail::hankel_coeff_step(nu, k, a);
    double t = a / std::pow(w, k);
    if (std::abs(t) > prev) break;  // asymptotic series started diverging
    prev = std::abs(t);
    p += (k % 2 ? -t : t);
    m += t;
    if (std::abs(t) < 1e-18) break;
  }
  double sub = std::cos((nu + 0.5) * pi) * std::exp(-2.0 * w) * m;
  return (p + sub) / (std::sqrt(2.0 * pi * w) * std::pow(w, nu));
}

/// I_nu(w) / w^nu. Overflows for very large w; prefer the scaled form in kernels.
inline double bessel_i_ratio(double nu, double w) {
  return bessel_i_ratio_scaled(nu, w) * std::exp(w);
}

/// J_nu(w) / w^nu, the even entire function of w.
inline double bessel_j_ratio(double nu, double w) {
  if (!(nu > -1.0)) throw DomainError("bessel_j_ratio: order must be > -1");
  w = std::abs(w);
  if (w < detail::kBesselSeriesCrossover) {
    // Alternating series in extended precision; loses ~ w/ln(10) digits to
    // cancellation, acceptable below the crossover.
    long double term = 1.0L / (std::pow(2.0L, (long double)nu) * (long double)gamma_fn(nu + 1.0));
    long double sum = term;
    long double q = (long double)w * w / 4.0L;
    for (int m = 1; m < 120; ++m) {
      term *= -q / ((long double)m * ((long double)m + nu));
      sum += term;
      if (std::abs(term) < 1e-20L * std::max(std::abs(sum), 1e-30L) && m > 4) break;
    }
    return (double)sum;
  }
  // Hankel asymptotic form: J_nu(w) = sqrt(2/(pi w)) (cos(chi) P - sin(chi) Q).
  double a = 1.0;
  double P = 1.0, Q = 0.0;
  double prev = std::numeric_limits<double>::max();
  for (int k = 1; k <= 40; ++k) {
    a = detail::hankel_coeff_step(nu, k, a);
    double t = a / std::pow(w, k);
    if (std::abs(t) > prev) break;
    prev = std::abs(t);
    switch (k % 4) {
      case 1: Q += t; break;
      case 2: P -= t; break;
      case 3: Q -= t; break;
      case 0: P += t; break;
    }
    if (std::abs(t) < 1e-18) break;
  }
  double chi = w - (0.5 * nu + 0.25) * pi;
  double j = std::sqrt(2.0 / (pi * w)) * (std::cos(chi) * P - std::sin(chi) * Q);
  return j / std::pow(w, nu);
}

/// phi_z^lambda(x): tensor product of J_{lambda_j - 1/2}(x_j z_j) / (x_j z_j)^{lambda_j - 1/2}.
inline double phi(const MultiplicityVector& lambda, const Vec& z, const Vec& x) {
  double p = 1.0;
  for (std::size_t j = 0; j < lambda.dim(); ++j)
    p *= bessel_j_ratio(lambda[j] - 0.5, x[j] * z[j]);
  return p;
}

/// One-dimensional psi factor: phi^lambda + i x z phi^{lambda+1}.
inline Complex psi1(double lambda, double z, double x) {
  return {bessel_j_ratio(lambda - 0.5, x * z),
          x * z * bessel_j_ratio(lambda + 0.5, x * z)};
}

/// psi_z^lambda(x), the Dunkl-Laplacian eigenfunction for eigenvalue |z|^2.
inline Complex psi(const MultiplicityVector& lambda, const Vec& z, const Vec& x) {
  Complex p{1.0, 0.0};
  for (std::size_t j = 0; j < lambda.dim(); ++j) p *= psi1(lambda[j], z[j], x[j]);
  return p;
}

/// Envelope of the one-dimensional |phi| bound: min(1, |w|^{-lambda}).
inline double phi_envelope(double lambda, double w) {
  w = std::abs(w);
  return w <= 1.0 ? 1.0 : std::pow(w, -lambda);
}

/// Density of dw_lambda at x. Infinite only when some x_j = 0 with lambda_j < 0;
/// that case is reported as +inf, never silently clipped.
inline double weight_density(const MultiplicityVector& lambda, const Vec& x) {
  double p = 1.0;
  for (std::size_t j = 0; j < lambda.dim(); ++j) {
    double a = std::abs(x[j]);
    if (a == 0.0) {
      if (lambda[j] < 0.0) return std::numeric_limits<double>::infinity();
      if (lambda[j] > 0.0) return 0.0;
      continue;  // lambda_j == 0 contributes 1
    }
    p *= std::pow(a, 2.0 * lambda[j]);
  }
  return p;
}

/// One-dimensional V_t^{lambda,+}(x): the dw_lambda^+ measure of (x-t, x+t) on (0,inf).
inline double ball_volume_plus_1d(double lambda, double x, double t) {
  if (!(t > 0.0)) throw DomainError("ball_volume_plus: radius must be positive");
  double e = 2.0 * lambda + 1.0;
  double hi = std::pow(x + t, e);
  double lo = x > t ? std::pow(x - t, e) : 0.0;
  return (hi - lo) / e;
}

/// V_t^{lambda,+}(x) = prod_j V_t^{lambda_j,+}(x_j); the cube-measure surrogate
/// for w_lambda^+(B(x,t)), comparable to t^n prod (x_j+t)^{2 lambda_j}.
inline double ball_volume_plus(const MultiplicityVector& lambda, const Vec& x, double t) {
  double p = 1.0;
  for (std::size_t j = 0; j < lambda.dim(); ++j) p *= ball_volume_plus_1d(lambda[j], x[j], t);
  return p;
}

/// q(x,y,s) = |x|^2 + |y|^2 + 2 sum x_j y_j s_j.
inline double q_form(const Vec& x, const Vec& y, const Vec& s) {
  double q = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (s[j] < -1.0 || s[j] > 1.0) throw DomainError("q_form: s outside [-1,1]^n");
    q += x[j] * x[j] + y[j] * y[j] + 2.0 * x[j] * y[j] * s[j];
  }
  return q;
}

/// Xi_lambda(x,z,t) = prod_j (x_j+z_j)^{2 lambda_j} / V_{sqrt t}^{lambda_j,+}(x_j).
inline double xi(const MultiplicityVector& lambda, const Vec& x, const Vec& z, double t) {
  if (!(t > 0.0)) throw DomainError("xi: t must be positive");
  double rt = std::sqrt(t);
  double p = 1.0;
  for (std::size_t j = 0; j < lambda.dim(); ++j) {
    double xz = x[j] + z[j];
    if (!(xz > 0.0)) throw DomainError("xi: x+z must lie in the open positive orthant");
    p *= std::pow(xz, 2.0 * lambda[j]) / ball_volume_plus_1d(lambda[j], x[j], rt);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Gaussian quadrature
// ---------------------------------------------------------------------------

struct QuadratureRule {
  Vec nodes;
  Vec weights;
};

namespace detail {

// Implicit-QL eigenvalues of a symmetric tridiagonal matrix, tracking only the
// first row of the eigenvector matrix (all that Golub-Welsch needs).
inline void tridiag_eigen_first_row(Vec& d, Vec& e, Vec& z) {
  std::size_t n = d.size();
  e.push_back(0.0);
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) throw std::runtime_error("tridiag_eigen: no convergence");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (std::size_t i = m; i-- > l;) {
          double f = s * e[i];
          double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          f = z[i + 1];
          z[i + 1] = s * z[i] + c * f;
          z[i] = c * z[i] - s * f;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace detail

/// Gauss-Jacobi rule for weight (1-x)^alpha (1+x)^beta on [-1,1] (Golub-Welsch).
inline QuadratureRule gauss_jacobi(double alpha, double beta, std::size_t n) {
  if (!(alpha > -1.0) || !(beta > -1.0)) throw DomainError("gauss_jacobi: parameters must be > -1");
  if (n == 0) throw DomainError("gauss_jacobi: order must be positive");
  double ab = alpha + beta;
  double mu0 = std::pow(2.0, ab + 1.0) * gamma_fn(alpha + 1.0) * gamma_fn(beta + 1.0) /
               gamma_fn(ab + 2.0);
  Vec d(n), e(n > 1 ? n - 1 : 0), z(n, 0.0);
  z[0] = 1.0;
  d[0] = (beta - alpha) / (ab + 2.0);
  for (std::size_t k = 1; k < n; ++k) {
    double kk = static_cast<double>(k);
    d[k] = (beta * beta - alpha * alpha) / ((2.0 * kk + ab) * (2.0 * kk + ab + 2.0));
    double bk;
    if (k == 1) {
      bk = 4.0 * (alpha + 1.0) * (beta + 1.0) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
    } else {
      bk = 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab) /
           ((2.0 * kk + ab) * (2.0 * kk + ab) * (2.0 * kk + ab + 1.0) * (2.0 * kk + ab - 1.0));
    }
    e[k - 1] = std::sqrt(bk);
  }
  detail::tridiag_eigen_first_row(d, e, z);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = d[order[i]];
    rule.weights[i] = mu0 * z[order[i]] * z[order[i]];
  }
  return rule;
}

inline QuadratureRule gauss_legendre(std::size_t n) { return gauss_jacobi(0.0, 0.0, n); }

/// Tensor Gauss-Jacobi realization of Omega_nu = (x)_j Omega_{nu_j}, with the
/// normalization 1/(sqrt(pi) 2^{nu-1/2} Gamma(nu)) folded into the weights.
struct OmegaRule {
  Vec nu;
  std::size_t order = 0;
  std::vector<Vec> axis_nodes;    // per-axis nodes in [-1,1]
  std::vector<Vec> axis_weights;  // per-axis normalized weights
};

/// `norm_scale` perturbs the normalizing constant; it exists solely so the
/// verification harness can run negative controls. Leave at 1 otherwise.
inline OmegaRule omega_rule(const Vec& nu, std::size_t order, double norm_scale = 1.0) {
  if (order == 0) throw DomainError("omega_rule: order must be positive");
  OmegaRule r;
  r.nu = nu;
  r.order = order;
  for (double v : nu) {
    if (!(v > 0.0)) throw DomainError("omega_rule: each nu_j must be > 0");
    QuadratureRule gj = gauss_jacobi(v - 1.0, v - 1.0, order);
    double c = norm_scale / (std::sqrt(pi) * std::pow(2.0, v - 0.5) * gamma_fn(v));
    for (double& w : gj.weights) w *= c;
    r.axis_nodes.push_back(std::move(gj.nodes));
    r.axis_weights.push_back(std::move(gj.weights));
  }
  return r;
}

/// Exact total mass of the one-dimensional Omega_nu measure.
inline double omega_total_mass(double nu) {
  return 1.0 / (std::pow(2.0, nu - 0.5) * gamma_fn(nu + 0.5));
}

}  // namespace dunkl

#endif  // DUNKL_ANALYTIC_HPP_
