#pragma once

// Gegenbauer polynomials and the one-dimensional integrals into which the
// coupling integral over S^n factors.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "hsu/errors.hpp"
#include "hsu/numeric.hpp"

namespace hsu {

/// Default cap on polynomial degrees evaluated by recurrence.
inline constexpr std::int64_t kDefaultMaxDegree = 4096;

struct GegenbauerParams {
  double order;        // lambda > -1/2
  std::int64_t degree; // l >= 0
};

namespace detail {

inline void check_gegenbauer(const GegenbauerParams& p, std::int64_t max_degree) {
  if (!(p.order > -0.5)) throw DomainError("Gegenbauer order must exceed -1/2");
  if (p.degree < 0) throw DomainError("Gegenbauer degree must be nonnegative");
  if (p.degree > max_degree) {
    throw DomainError("Gegenbauer degree " + std::to_string(p.degree) + " exceeds cap " +
                      std::to_string(max_degree));
  }
}

}  // namespace detail

/// C_l^lambda(t) by the upward three-term recurrence
///   (l+1) C_{l+1} = 2 (l+lambda) t C_l - (l+2 lambda-1) C_{l-1},  C_0 = 1, C_1 = 2 lambda t.
inline double gegenbauer_eval(const GegenbauerParams& p, double t,
                              std::int64_t max_degree = kDefaultMaxDegree) {
  detail::check_gegenbauer(p, max_degree);
  if (!(std::fabs(t) <= 1.0)) throw DomainError("Gegenbauer argument outside [-1, 1]");
  const double lam = p.order;
  if (p.degree == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * lam * t;
  for (std::int64_t l = 1; l < p.degree; ++l) {
    const double ld = static_cast<double>(l);
    const double next = (2.0 * (ld + lam) * t * cur - (ld + 2.0 * lam - 1.0) * prev) / (ld + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// All of C_0^lambda(t) .. C_L^lambda(t).
inline std::vector<double> gegenbauer_all(double order, std::int64_t max_l, double t,
                                          std::int64_t max_degree = kDefaultMaxDegree) {
  detail::check_gegenbauer({order, max_l}, max_degree);
  if (!(std::fabs(t) <= 1.0)) throw DomainError("Gegenbauer argument outside [-1, 1]");
  std::vector<double> c(static_cast<std::size_t>(max_l) + 1);
  c[0] = 1.0;
  if (max_l >= 1) c[1] = 2.0 * order * t;
  for (std::int64_t l = 1; l < max_l; ++l) {
    const double ld = static_cast<double>(l);
    c[l + 1] = (2.0 * (ld + order) * t * c[l] - (ld + 2.0 * order - 1.0) * c[l - 1]) / (ld + 1.0);
  }
  return c;
}

/// log of the squared weighted L2 norm
///   h_l = pi Gamma(l + 2 lambda) / (2^{2 lambda - 1} l! (l + lambda) Gamma(lambda)^2).
inline double log_gegenbauer_norm_sq(double order, std::int64_t l) {
  const double ld = static_cast<double>(l);
  return std::log(std::numbers::pi) + log_gamma(ld + 2.0 * order) -
         (2.0 * order - 1.0) * std::numbers::ln2 - log_factorial(l) - std::log(ld + order) -
         2.0 * log_gamma(order);
}

/// int_{-1}^{1} C_{l1}^lambda C_{l2}^lambda (1-t^2)^{lambda-1/2} dt, for lambda > 0.
inline double gegenbauer_l2_pairing(double order, std::int64_t l1, std::int64_t l2) {
  if (!(order > 0.0)) throw DomainError("gegenbauer_l2_pairing requires lambda > 0");
  if (l1 < 0 || l2 < 0) throw DomainError("Gegenbauer degree must be nonnegative");
  if (l1 != l2) return 0.0;
  return std::exp(log_gegenbauer_norm_sq(order, l1));
}

/// Arguments of the single theta integrals on axis iota: the index pairs
/// (k_{iota-1}, k_iota) of the conjugated harmonic and (m_{iota-1}, m_iota) of the other.
/// On the last axis the caller passes |k_{n-1}| and |m_{n-1}|.
struct ThetaIntegralArgs {
  int iota;
  std::int64_t k_prev;
  std::int64_t k_cur;
  std::int64_t m_prev;
  std::int64_t m_cur;
};

namespace detail {

inline void check_theta_args(const ThetaIntegralArgs& a, int n) {
  if (n < 2) throw DomainError("sphere dimension must be at least 2");
  if (a.iota < 1 || a.iota > n - 1) throw DomainError("theta axis index out of range");
  if (a.k_cur < 0 || a.m_cur < 0 || a.k_prev < a.k_cur || a.m_prev < a.m_cur) {
    throw DomainError("theta integral indices must satisfy k_prev >= k_cur >= 0");
  }
}

// C_{theta,1}(iota, a, b, a, b)
inline SignedLog theta_1_diag(int n, int iota, std::int64_t a, std::int64_t b) {
  const double h = 0.5 * (n - iota);
  const double ad = static_cast<double>(a);
  const double bd = static_cast<double>(b);
  const double lg = std::log(std::numbers::pi) + log_gamma((n - iota) + ad + bd) -
                    ((n - iota) + 2.0 * bd - 1.0) * std::numbers::ln2 - log_factorial(a - b) -
                    std::log(h + ad) - 2.0 * log_gamma(h + bd);
  return {1, lg};
}

// C_{theta,c}(iota, a, b, a+1, b)
inline SignedLog theta_c_step(int n, int iota, std::int64_t a, std::int64_t b) {
  const double h = 0.5 * (n - iota);
  const double ad = static_cast<double>(a);
  const double bd = static_cast<double>(b);
  const double lg = std::log(std::numbers::pi) + log_gamma((n - iota) + ad + bd + 1.0) -
                    ((n - iota) + 2.0 * bd) * std::numbers::ln2 - log_factorial(a - b) -
                    std::log(h + ad) - std::log(h + ad + 1.0) - 2.0 * log_gamma(h + bd);
  return {1, lg};
}

// C_{theta,s}(iota, a, b, a+1, b+1): both indices step the same way.
inline SignedLog theta_s_parallel(int n, int iota, std::int64_t a, std::int64_t b) {
  const double h = 0.5 * (n - iota);
  const double ad = static_cast<double>(a);
  const double bd = static_cast<double>(b);
  const double lg = std::log(std::numbers::pi) + std::log(h + bd) +
                    log_gamma((n - iota) + ad + bd + 2.0) -
                    ((n - iota) + 2.0 * bd + 1.0) * std::numbers::ln2 - log_factorial(a - b) -
                    std::log(h + ad) - std::log(h + ad + 1.0) - 2.0 * log_gamma(h + bd + 1.0);
  return {1, lg};
}

// C_{theta,s}(iota, a, b+1, a+1, b): the indices step in opposite directions; negative.
inline SignedLog theta_s_crossed(int n, int iota, std::int64_t a, std::int64_t b) {
  const double h = 0.5 * (n - iota);
  const double ad = static_cast<double>(a);
  const double bd = static_cast<double>(b);
  const double lg = std::log(std::numbers::pi) + std::log(h + bd) +
                    log_gamma((n - iota) + ad + bd + 1.0) -
                    ((n - iota) + 2.0 * bd + 1.0) * std::numbers::ln2 -
                    log_factorial(a - b - 1) - std::log(h + ad) - std::log(h + ad + 1.0) -
                    2.0 * log_gamma(h + bd + 1.0);
  return {-1, lg};
}

inline SignedLog theta_1_log(const ThetaIntegralArgs& a, int n) {
  if (a.k_prev != a.m_prev || a.k_cur != a.m_cur) return SignedLog::zero();
  return theta_1_diag(n, a.iota, a.k_prev, a.k_cur);
}

inline SignedLog theta_c_log(const ThetaIntegralArgs& a, int n) {
  if (a.k_cur != a.m_cur) return SignedLog::zero();
  const std::int64_t d = a.m_prev - a.k_prev;
  if (d != 1 && d != -1) return SignedLog::zero();
  return theta_c_step(n, a.iota, std::min(a.k_prev, a.m_prev), a.k_cur);
}

inline SignedLog theta_s_log(const ThetaIntegralArgs& a, int n) {
  const std::int64_t da = a.m_prev - a.k_prev;
  const std::int64_t db = a.m_cur - a.k_cur;
  if ((da != 1 && da != -1) || (db != 1 && db != -1)) return SignedLog::zero();
  const std::int64_t lo_a = std::min(a.k_prev, a.m_prev);
  const std::int64_t lo_b = std::min(a.k_cur, a.m_cur);
  if (da == db) return theta_s_parallel(n, a.iota, lo_a, lo_b);
  return theta_s_crossed(n, a.iota, lo_a, lo_b);
}

}  // namespace detail

/// C_{theta,1}: int_0^pi C_{k_prev-k_cur}^{(n-iota)/2+k_cur}(cos) C_{m_prev-m_cur}^{(n-iota)/2+m_cur}(cos)
/// sin^{k_cur+m_cur+n-iota} d(theta).
///
/// Nonzero only when both index pairs coincide. For k_cur != m_cur the two polynomials have
/// different orders and the integral is not one that enters the coupling integral; it is
/// reported as zero, as are the analogous cases below.
inline double theta_integral_1(const ThetaIntegralArgs& a, int n) {
  detail::check_theta_args(a, n);
  return detail::theta_1_log(a, n).value();
}

/// C_{theta,c}: as C_{theta,1} with an extra cos(theta) factor. Nonzero only for
/// k_cur == m_cur and |m_prev - k_prev| == 1; symmetric in swapping the two harmonics.
inline double theta_integral_c(const ThetaIntegralArgs& a, int n) {
  detail::check_theta_args(a, n);
  return detail::theta_c_log(a, n).value();
}

/// C_{theta,s}: as C_{theta,1} with an extra sin(theta) factor. Nonzero only for
/// |m_prev - k_prev| == 1 and |m_cur - k_cur| == 1; negative when the two steps have
/// opposite sign.
inline double theta_integral_s(const ThetaIntegralArgs& a, int n) {
  detail::check_theta_args(a, n);
  return detail::theta_s_log(a, n).value();
}

enum class PhiKind { One, Cos, Sin };

/// int_0^{2 pi} e^{i d phi} w(phi) d(phi) with w = 1, cos, sin; d = m_{n-1} - k_{n-1}.
inline std::complex<double> phi_integral(PhiKind kind, std::int64_t d) {
  constexpr double pi = std::numbers::pi;
  switch (kind) {
    case PhiKind::One:
      return d == 0 ? 2.0 * pi : 0.0;
    case PhiKind::Cos:
      return (d == 1 || d == -1) ? pi : 0.0;
    case PhiKind::Sin:
      return (d == 1 || d == -1) ? std::complex<double>(0.0, static_cast<double>(d) * pi) : 0.0;
  }
  return 0.0;
}

}  // namespace hsu
