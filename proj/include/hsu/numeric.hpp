#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "hsu/errors.hpp"

namespace hsu {

/// Natural log of Gamma(x) for x > 0.
inline double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw DomainError("log_gamma: pole or negative argument x=" + std::to_string(x));
  }
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);  // reentrant; std::lgamma writes the global signgam
#else
  return std::lgamma(x);
#endif
}

inline double log_factorial(std::int64_t k) {
  if (k < 0) throw DomainError("log_factorial: negative argument");
  return log_gamma(static_cast<double>(k) + 1.0);
}

/// log of the generalized binomial coefficient binom(a, k) = Gamma(a+1) / (k! Gamma(a-k+1)),
/// defined for a - k > -1.
inline double log_binomial(double a, std::int64_t k) {
  if (k < 0 || a - static_cast<double>(k) <= -1.0) {
    throw DomainError("log_binomial: invalid arguments");
  }
  return log_gamma(a + 1.0) - log_factorial(k) - log_gamma(a - static_cast<double>(k) + 1.0);
}

/// Integer binomial coefficient as a double. Exact below n = 67, log-gamma above.
inline double binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  if (n <= 66) {
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::int64_t i = 1; i <= k; ++i) r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    return static_cast<double>(static_cast<std::uint64_t>(r));
  }
  return std::exp(log_binomial(static_cast<double>(n), k));
}

/// Generalized binomial binom(a, k) for real a.
inline double binomial(double a, std::int64_t k) { return std::exp(log_binomial(a, k)); }

/// Product of real factors held as sign and log-magnitude, so long Gamma-ratio
/// products can be assembled without overflow and exponentiated once.
struct SignedLog {
  int sign = 1;  // 0 means exact zero
  double log_abs = 0.0;

  static SignedLog zero() { return {0, -std::numeric_limits<double>::infinity()}; }
  static SignedLog from(double v) {
    if (v == 0.0) return zero();
    return {v < 0.0 ? -1 : 1, std::log(std::fabs(v))};
  }
  bool is_zero() const { return sign == 0; }
  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

  SignedLog& operator*=(const SignedLog& o) {
    sign *= o.sign;
    log_abs += o.log_abs;
    return *this;
  }
  friend SignedLog operator*(SignedLog a, const SignedLog& b) { return a *= b; }
};

/// Neumaier-compensated accumulator.
template <typename T>
class CompensatedSum {
 public:
  void add(T x) {
    T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(T x) {
    add(x);
    return *this;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

/// Extrapolates f(h) -> f(0) from samples at distinct h assuming a regular power series
/// in h (Neville's scheme, i.e. polynomial Richardson extrapolation).
inline double richardson_limit(std::span<const double> h, std::span<const double> f) {
  if (h.size() != f.size() || h.empty()) {
    throw DomainError("richardson_limit: sample sizes differ or are empty");
  }
  std::vector<double> p(f.begin(), f.end());
  const std::size_t n = h.size();
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t i = 0; i + k < n; ++i) {
      // interpolant through points i..i+k evaluated at 0
      p[i] = (h[i + k] * p[i] - h[i] * p[i + 1]) / (h[i + k] - h[i]);
    }
  }
  return p[0];
}

/// Geometric rho grid used for numerical rho -> 0 limits.
inline std::vector<double> default_limit_grid() { return {0.16, 0.08, 0.04, 0.02, 0.01}; }

inline bool is_half_integer(double x) {
  double twice = 2.0 * x;
  return std::isfinite(x) && std::fabs(twice - std::round(twice)) < 1e-12;
}

}  // namespace hsu
