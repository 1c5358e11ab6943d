#pragma once

// Geometry of S^n in hyperspherical coordinates and the complex orthonormal basis
// Y_l^k of hyperspherical harmonics (normalized surface measure, total mass 1).

#include <algorithm>
#include <cmath>
#include <compare>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "hsu/errors.hpp"
#include "hsu/numeric.hpp"
#include "hsu/special_functions.hpp"

namespace hsu {

/// Dimension of the sphere S^n, n >= 2, with lambda = (n-1)/2.
class SphereDim {
 public:
  explicit SphereDim(int n) : n_(n) {
    if (n < 2) throw DomainError("sphere dimension n must be at least 2");
  }
  static SphereDim from_lambda(double lambda) {
    if (!is_half_integer(lambda) || lambda < 0.5) {
      throw DomainError("lambda must be a half-integer >= 1/2");
    }
    return SphereDim(static_cast<int>(std::lround(2.0 * lambda)) + 1);
  }

  int n() const { return n_; }
  double lambda() const { return 0.5 * (n_ - 1); }
  /// Number of entries of k (= n - 1).
  int depth() const { return n_ - 1; }
  /// Ambient dimension n + 1.
  int ambient() const { return n_ + 1; }

  friend bool operator==(SphereDim, SphereDim) = default;

 private:
  int n_;
};

/// Degree l together with the sequence k = (k_1, ..., k_{n-1}),
/// l >= k_1 >= ... >= k_{n-2} >= |k_{n-1}| >= 0.
struct MultiIndex {
  std::int64_t l = 0;
  std::vector<std::int64_t> k;

  /// Entry j of the extended sequence (k_0 = l, k_1, ..., k_{n-1}).
  std::int64_t at(std::size_t j) const { return j == 0 ? l : k[j - 1]; }
  std::size_t size() const { return k.size() + 1; }

  static MultiIndex zonal(const SphereDim& d, std::int64_t l) {
    return {l, std::vector<std::int64_t>(static_cast<std::size_t>(d.depth()), 0)};
  }

  bool valid_for(const SphereDim& d) const {
    if (static_cast<int>(k.size()) != d.depth() || l < 0) return false;
    std::int64_t prev = l;
    for (std::size_t j = 0; j < k.size(); ++j) {
      const bool last = j + 1 == k.size();
      const std::int64_t v = last ? (k[j] < 0 ? -k[j] : k[j]) : k[j];
      if (v < 0 || v > prev) return false;
      prev = v;
    }
    return true;
  }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
    if (auto c = a.l <=> b.l; c != 0) return c;
    return std::lexicographical_compare_three_way(a.k.begin(), a.k.end(), b.k.begin(), b.k.end());
  }

  std::string str() const {
    std::string s = "(" + std::to_string(l) + ";";
    for (std::size_t j = 0; j < k.size(); ++j) s += (j ? "," : "") + std::to_string(k[j]);
    return s + ")";
  }
};

inline std::ostream& operator<<(std::ostream& os, const MultiIndex& m) { return os << m.str(); }

inline void require_valid(const SphereDim& d, const MultiIndex& idx) {
  if (!idx.valid_for(d)) {
    throw DomainError("invalid multi-index " + idx.str() + " for S^" + std::to_string(d.n()));
  }
}

/// A point on S^n held both as hyperspherical angles and Cartesian coordinates.
class SpherePoint {
 public:
  /// theta has n-1 entries in [0, pi]; phi in [0, 2 pi).
  SpherePoint(const SphereDim& d, std::vector<double> theta, double phi)
      : theta_(std::move(theta)), phi_(phi) {
    if (static_cast<int>(theta_.size()) != d.depth()) {
      throw DomainError("SpherePoint: expected n-1 polar angles");
    }
    cos_.resize(theta_.size());
    sin_.resize(theta_.size());
    for (std::size_t j = 0; j < theta_.size(); ++j) {
      cos_[j] = std::cos(theta_[j]);
      sin_[j] = std::sin(theta_[j]);
    }
    build_cartesian();
  }

  /// From precomputed cos/sin of the polar angles (used by quadrature grids).
  SpherePoint(std::vector<double> theta, std::vector<double> cos_t, std::vector<double> sin_t,
              double phi)
      : theta_(std::move(theta)), cos_(std::move(cos_t)), sin_(std::move(sin_t)), phi_(phi) {
    build_cartesian();
  }

  static SpherePoint from_cartesian(const SphereDim& d, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != d.ambient()) {
      throw DomainError("SpherePoint: expected n+1 Cartesian coordinates");
    }
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    const double r = std::sqrt(r2);
    if (!(r > 0.0)) throw DomainError("SpherePoint: zero vector");
    const int n = d.n();
    std::vector<double> theta(static_cast<std::size_t>(n - 1));
    // tail[j] = |(x_j, ..., x_{n+1})|
    std::vector<double> tail(static_cast<std::size_t>(n + 2), 0.0);
    for (int j = n; j >= 0; --j) tail[j] = std::hypot(tail[j + 1], x[j] / r);
    for (int j = 0; j < n - 1; ++j) theta[j] = std::atan2(tail[j + 1], x[j] / r);
    double phi = std::atan2(x[n], x[n - 1]);
    if (phi < 0.0) phi += 2.0 * std::numbers::pi;
    return SpherePoint(d, std::move(theta), phi);
  }

  const std::vector<double>& theta() const { return theta_; }
  double phi() const { return phi_; }
  const std::vector<double>& cos_theta() const { return cos_; }
  const std::vector<double>& sin_theta() const { return sin_; }
  const std::vector<double>& cartesian() const { return x_; }

 private:
  void build_cartesian() {
    const std::size_t m = theta_.size();
    x_.assign(m + 2, 0.0);
    double s = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      x_[j] = s * cos_[j];
      s *= sin_[j];
    }
    x_[m] = s * std::cos(phi_);
    x_[m + 1] = s * std::sin(phi_);
  }

  std::vector<double> theta_;
  std::vector<double> cos_;
  std::vector<double> sin_;
  double phi_;
  std::vector<double> x_;
};

/// Sigma_n = 2 pi^{(n+1)/2} / Gamma((n+1)/2), the unnormalized surface area of S^n.
inline double surface_constant(const SphereDim& d) {
  const double h = 0.5 * (d.n() + 1);
  return 2.0 * std::exp(h * std::log(std::numbers::pi) - log_gamma(h));
}

inline double log_surface_constant(const SphereDim& d) {
  const double h = 0.5 * (d.n() + 1);
  return std::numbers::ln2 + h * std::log(std::numbers::pi) - log_gamma(h);
}

/// dim H_l(S^n) = 2 (l + lambda) (l + 2 lambda - 1)! / (l! (2 lambda)!).
inline std::int64_t harmonic_count(const SphereDim& d, std::int64_t l) {
  if (l < 0) throw DomainError("degree must be nonnegative");
  const double lam = d.lambda();
  const double ld = static_cast<double>(l);
  const double v = std::log(2.0 * (ld + lam)) + log_gamma(ld + 2.0 * lam) - log_factorial(l) -
                   log_gamma(2.0 * lam + 1.0);
  return static_cast<std::int64_t>(std::llround(std::exp(v)));
}

/// All of M_{n-1}(l) in ascending lexicographic order.
inline std::vector<MultiIndex> enumerate_indices(const SphereDim& d, std::int64_t l) {
  if (l < 0) throw DomainError("degree must be nonnegative");
  std::vector<MultiIndex> out;
  const int depth = d.depth();
  std::vector<std::int64_t> k(static_cast<std::size_t>(depth), 0);
  std::function<void(int, std::int64_t)> rec = [&](int j, std::int64_t bound) {
    if (j == depth - 1) {
      for (std::int64_t v = -bound; v <= bound; ++v) {
        k[j] = v;
        out.push_back({l, k});
      }
      return;
    }
    for (std::int64_t v = 0; v <= bound; ++v) {
      k[j] = v;
      rec(j + 1, v);
    }
  };
  rec(0, l);
  return out;
}

namespace detail {

// log of the factor tau of A_l^k squared:
//   2^{n-tau+2b-2} (a-b)! (n-tau+2a) Gamma((n-tau)/2+b)^2 / (sqrt(pi) (n-tau+a+b-1)!)
// with a = k_{tau-1}, b = k_tau (absolute value on the last axis).
inline double log_norm_factor(int n, int tau, std::int64_t a, std::int64_t b) {
  const double ad = static_cast<double>(a);
  const double bd = static_cast<double>(b);
  const double m = n - tau;
  return (m + 2.0 * bd - 2.0) * std::numbers::ln2 + log_factorial(a - b) +
         std::log(m + 2.0 * ad) + 2.0 * log_gamma(0.5 * m + bd) -
         0.5 * std::log(std::numbers::pi) - log_gamma(m + ad + bd);
}

inline std::int64_t axis_value(const MultiIndex& idx, std::size_t j) {
  const std::int64_t v = idx.at(j);
  return (j + 1 == idx.size() && v < 0) ? -v : v;
}

}  // namespace detail

/// log A_l^k.
inline double log_normalization(const SphereDim& d, const MultiIndex& idx) {
  require_valid(d, idx);
  const int n = d.n();
  double s = -log_gamma(0.5 * (n + 1));
  for (int tau = 1; tau <= n - 1; ++tau) {
    s += detail::log_norm_factor(n, tau, detail::axis_value(idx, tau - 1),
                                 detail::axis_value(idx, tau));
  }
  return 0.5 * s;
}

/// Normalization constant A_l^k making Y_l^k unit-norm under the normalized measure.
inline double normalization_constant(const SphereDim& d, const MultiIndex& idx) {
  return std::exp(log_normalization(d, idx));
}

/// Y_l^k(p) = A_l^k prod_tau C_{k_{tau-1}-k_tau}^{(n-tau)/2+k_tau}(cos theta_tau)
///            sin^{k_tau}(theta_tau) * e^{i k_{n-1} phi}, |k_{n-1}| on the last polar axis.
inline std::complex<double> eval_harmonic(const SphereDim& d, const MultiIndex& idx,
                                          const SpherePoint& p) {
  require_valid(d, idx);
  const int n = d.n();
  double v = normalization_constant(d, idx);
  const auto& c = p.cos_theta();
  const auto& s = p.sin_theta();
  for (int tau = 1; tau <= n - 1; ++tau) {
    const std::int64_t a = detail::axis_value(idx, tau - 1);
    const std::int64_t b = detail::axis_value(idx, tau);
    const double order = 0.5 * (n - tau) + static_cast<double>(b);
    double t = std::clamp(c[tau - 1], -1.0, 1.0);
    v *= gegenbauer_eval({order, a - b}, t, std::max<std::int64_t>(a - b, kDefaultMaxDegree));
    if (b > 0) v *= std::pow(s[tau - 1], static_cast<double>(b));
    if (v == 0.0) break;
  }
  const double arg = static_cast<double>(idx.k.back()) * p.phi();
  return {v * std::cos(arg), v * std::sin(arg)};
}

/// Eigenvalue of the Laplace-Beltrami operator on H_l(S^n): -l (l + 2 lambda).
inline double laplace_eigenvalue(const SphereDim& d, std::int64_t l) {
  if (l < 0) throw DomainError("degree must be nonnegative");
  const double ld = static_cast<double>(l);
  return -ld * (ld + 2.0 * d.lambda());
}

}  // namespace hsu
