#ifndef DUNKL_COMMON_HPP_
#define DUNKL_COMMON_HPP_

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace dunkl {

using Complex = std::complex<double>;
using Vec = std::vector<double>;
using CVec = std::vector<Complex>;

inline constexpr double pi = 3.14159265358979323846264338327950288;

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Compensated (Kahan) accumulator for long sums sensitive to cancellation.
class KahanSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

inline Vec linspace(double a, double b, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {a};
  Vec out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

/// n log-spaced points on [a, b], a,b > 0.
inline Vec logspace(double a, double b, std::size_t n) {
  if (a <= 0.0 || b <= 0.0) throw DomainError("logspace: endpoints must be positive");
  Vec out = linspace(std::log(a), std::log(b), n);
  for (double& u : out) u = std::exp(u);
  return out;
}

/// Row-major multi-index over a tensor grid with per-axis sizes `dims`.
inline std::size_t flat_index(const std::vector<std::size_t>& idx,
                              const std::vector<std::size_t>& dims) {
  std::size_t f = 0;
  for (std::size_t j = 0; j < dims.size(); ++j) f = f * dims[j] + idx[j];
  return f;
}

inline bool next_multi_index(std::vector<std::size_t>& idx,
                             const std::vector<std::size_t>& dims) {
  for (std::size_t j = dims.size(); j-- > 0;) {
    if (++idx[j] < dims[j]) return true;
    idx[j] = 0;
  }
  return false;
}

inline std::size_t total_size(const std::vector<std::size_t>& dims) {
  std::size_t s = 1;
  for (std::size_t d : dims) s *= d;
  return s;
}

inline double norm2(const Vec& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

inline Vec vec_sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) r[j] = a[j] - b[j];
  return r;
}

inline Vec vec_add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) r[j] = a[j] + b[j];
  return r;
}

inline std::size_t thread_count() {
  if (const char* env = std::getenv("DUNKL_THREADS")) {
    long v = std::atol(env);
    if (v >= 1) return static_cast<std::size_t>(v);
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

/// Deterministic parallel loop: body(i) writes only to slot i of its output;
/// the chunk split does not affect results.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  std::size_t nthreads = std::min(thread_count(), count == 0 ? std::size_t{1} : count);
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(nthreads);
  for (std::size_t w = 0; w < nthreads; ++w) {
    workers.emplace_back([&, w]() {
      for (std::size_t i = w; i < count; i += nthreads) body(i);
    });
  }
  for (auto& th : workers) th.join();
}

/// Seeded generator for reproducible sampling.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double a, double b) {
    return a + (b - a) * canonical();
  }

  /// Log-uniform on [a, b], a,b > 0.
  double log_uniform(double a, double b) {
    return std::exp(uniform(std::log(a), std::log(b)));
  }

  double canonical() {
    // 53-bit uniform in [0,1); avoids distribution objects so streams are
    // identical across standard library implementations.
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }

  std::uint64_t raw() { return rng_(); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace dunkl

#endif  // DUNKL_COMMON_HPP_
