#pragma once

// Second directional derivative G of the Poisson wavelet g_rho^1 on S^n, n = 2 lambda + 1:
//
//   G = 1/Sigma_n [ sum_{l>=1} beta_{l,0}^2 (l+lambda)/lambda rho l e^{-rho l} Y_l^{(0,...)} / A_l^0
//                 - sum_{l>=2} beta_{l,0} beta_{l,1} (l+lambda)/lambda rho l e^{-rho l} Y_l^{(2,0,...)} / A_l^0 ]
//
// Exact quantities come from the sums S_m^mu(rho) = sum_l binom(l+mu, l) l^m e^{-2 rho l};
// the small-rho expansions are returned as AsymptoticPolynomial values.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "hsu/asymptotic.hpp"
#include "hsu/errors.hpp"
#include "hsu/numeric.hpp"
#include "hsu/sphere_core.hpp"
#include "hsu/uncertainty.hpp"

namespace hsu {

/// Default cap on the number of terms of any adaptively truncated series.
inline constexpr std::int64_t kMaxSeriesTerms = 50'000'000;

struct WaveletParams {
  double lambda;
  double rho;
};

namespace detail {

inline void check_lambda_g(double lambda) {
  if (!is_half_integer(lambda) || lambda < 1.0) {
    throw DomainError("directional wavelet needs a half-integer lambda >= 1 (n >= 3)");
  }
}

inline void check_lambda_asymptotic(double lambda) {
  if (!is_half_integer(lambda) || lambda < 1.5) {
    throw DomainError("asymptotics require lambda >= 3/2");
  }
}

inline void check_rho(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("rho must be positive and finite");
}

inline void check_params(const WaveletParams& w) {
  check_lambda_g(w.lambda);
  check_rho(w.rho);
}

inline int mu_of(double lambda) { return static_cast<int>(std::lround(2.0 * lambda)); }

// log binom(l + mu, l) for integer mu, as a sum of logs of exact ratios.
inline double log_binom_shift(std::int64_t l, int mu) {
  double s = 0.0;
  const double ld = static_cast<double>(l);
  for (int j = 1; j <= mu; ++j) s += std::log1p(ld / j);
  return s;
}

}  // namespace detail

/// beta_{l,k1} = sqrt((k1+1)(2 lambda+k1-1)(l-k1)(l+2 lambda+k1) / ((2 lambda+2 k1-1)(2 lambda+2 k1+1))).
inline double beta(double lambda, std::int64_t l, std::int64_t k1) {
  if (k1 < 0 || k1 > l) throw DomainError("beta requires 0 <= k1 <= l");
  const double k = static_cast<double>(k1);
  const double ld = static_cast<double>(l);
  const double den = (2.0 * lambda + 2.0 * k - 1.0) * (2.0 * lambda + 2.0 * k + 1.0);
  if (!(den > 0.0)) throw DomainError("beta undefined for this lambda");
  const double num = (k + 1.0) * (2.0 * lambda + k - 1.0) * (ld - k) * (ld + 2.0 * lambda + k);
  return std::sqrt(std::max(num, 0.0) / den);
}

/// Zonal index (0,...,0) and the tesseral index (2,0,...,0) of degree l.
inline MultiIndex g_zonal_index(const SphereDim& d, std::int64_t l) { return MultiIndex::zonal(d, l); }
inline MultiIndex g_tesseral_index(const SphereDim& d, std::int64_t l) {
  MultiIndex m = MultiIndex::zonal(d, l);
  m.k[0] = 2;
  return m;
}

/// G_l^0 (first) and G_l^{(2,0,...)} (second).
inline std::pair<double, double> g_coefficient_pair(const WaveletParams& w, std::int64_t l) {
  const SphereDim d = SphereDim::from_lambda(w.lambda);
  if (l < 1) return {0.0, 0.0};
  const double lam = w.lambda;
  const double ld = static_cast<double>(l);
  const double common = -log_surface_constant(d) + std::log((ld + lam) / lam) +
                        std::log(w.rho * ld) - w.rho * ld - log_normalization(d, g_zonal_index(d, l));
  const double b0 = beta(lam, l, 0);
  const double zonal = std::exp(common + 2.0 * std::log(b0));
  if (l < 2) return {zonal, 0.0};
  const double tess = -std::exp(common + std::log(b0) + std::log(beta(lam, l, 1)));
  return {zonal, tess};
}

/// Degree past which the tail of sum binom(l+mu, l) l^m e^{-2 rho l} is below rel_tol of
/// the partial sum: l beyond five times the peak (mu+m)/(2 rho) and the current term small.
inline std::int64_t series_cutoff(int mu, int m, double rho, double rel_tol,
                                  std::int64_t max_terms = kMaxSeriesTerms) {
  detail::check_rho(rho);
  const double peak = (mu + m) / (2.0 * rho);
  // partial sum held as partial * e^{ref}
  double partial = 0.0;
  double ref = 0.0;
  for (std::int64_t l = 1; l <= max_terms; ++l) {
    const double lt = detail::log_binom_shift(l, mu) + m * std::log(static_cast<double>(l)) -
                      2.0 * rho * static_cast<double>(l);
    if (l == 1 || lt > ref) {
      partial *= std::exp(ref - lt);
      ref = lt;
    }
    const double t = std::exp(lt - ref);
    partial += t;
    if (static_cast<double>(l) > 5.0 * peak && t < rel_tol * partial) return l;
  }
  throw ConvergenceError("series did not converge within " + std::to_string(max_terms) + " terms");
}

/// Truncation degree for the expansion of G: tail of every weighted sum below 1e-18 relative.
inline std::int64_t g_truncation_degree(const WaveletParams& w) {
  detail::check_params(w);
  return std::max<std::int64_t>(2, series_cutoff(detail::mu_of(w.lambda), 10, w.rho, 1e-18));
}

/// Fourier expansion of G truncated at degree L.
inline FourierExpansion g_coefficients(const WaveletParams& w, std::int64_t L) {
  detail::check_params(w);
  if (L < 2) throw DomainError("truncation degree must be at least 2");
  const SphereDim d = SphereDim::from_lambda(w.lambda);
  FourierExpansion f(d);
  for (std::int64_t l = 1; l <= L; ++l) {
    const auto [z, t] = g_coefficient_pair(w, l);
    if (z != 0.0) f.add(g_zonal_index(d, l), z);
    if (l >= 2 && t != 0.0) f.add(g_tesseral_index(d, l), t);
  }
  return f;
}

inline FourierExpansion g_coefficients(const WaveletParams& w) {
  return g_coefficients(w, g_truncation_degree(w));
}

/// S_m^mu(rho) = sum_{l>=0} binom(l+mu, l) l^m e^{-2 rho l}.
inline double s_sum_exact(int mu, int m, double rho, std::int64_t max_terms = kMaxSeriesTerms) {
  if (mu < 0 || m < 0) throw DomainError("S sum needs mu, m >= 0");
  detail::check_rho(rho);
  const double peak = (mu + m) / (2.0 * rho);
  CompensatedSum<double> s;
  if (m == 0) s += 1.0;
  for (std::int64_t l = 1; l <= max_terms; ++l) {
    const double ld = static_cast<double>(l);
    const double t = std::exp(detail::log_binom_shift(l, mu) + m * std::log(ld) - 2.0 * rho * ld);
    s += t;
    if (!std::isfinite(s.value())) throw ConvergenceError("S sum overflows");
    if (ld > 5.0 * peak && t < 1e-16 * s.value()) return s.value();
  }
  throw ConvergenceError("S sum did not converge within " + std::to_string(max_terms) + " terms");
}

/// Four-term small-rho expansion of S_m^mu, remainder O(rho^{-mu-m+3}); mu >= 3.
inline AsymptoticPolynomial s_sum_asymptotic(int mu, int m) {
  if (mu < 3) throw DomainError("S sum asymptotics require mu >= 3");
  if (m < 0) throw DomainError("S sum needs m >= 0");
  const double md = mu;
  const int p = mu + m;
  const double scale = -(p + 2) * std::numbers::ln2;
  const double lf = log_factorial(mu);
  AsymptoticPolynomial a;
  a.leading_power = -(p + 1);
  a.coefficients = {
      2.0 * std::exp(scale + log_factorial(p) - lf),
      2.0 * (md + 1.0) * std::exp(scale + log_factorial(p - 1) - log_factorial(mu - 1)),
      (md + 2.0 / 3.0) * (md + 1.0) * std::exp(scale + log_factorial(p - 2) - log_factorial(mu - 2)),
      md * (md + 1.0) * (md + 1.0) / 3.0 * std::exp(scale + log_factorial(p - 3) - log_factorial(mu - 3)),
  };
  a.error_order = -p + 3;
  return a;
}

namespace detail {

// 2 rho^2 / ((2 lambda+1)(2 lambda+3)); the 1/Sigma_n^2 factor is applied by callers.
inline double g_prefactor(const WaveletParams& w) {
  return 2.0 * w.rho * w.rho / ((2.0 * w.lambda + 1.0) * (2.0 * w.lambda + 3.0));
}

inline double inv_sigma_sq(double lambda) {
  return std::exp(-2.0 * log_surface_constant(SphereDim::from_lambda(lambda)));
}

// ||G||^2 Sigma_n^2
inline double norm_sq_scaled(const WaveletParams& w) {
  const int mu = mu_of(w.lambda);
  const double lam = w.lambda;
  const double r = w.rho;
  return g_prefactor(w) * (3.0 * s_sum_exact(mu, 6, r) + 9.0 * lam * s_sum_exact(mu, 5, r) +
                           2.0 * lam * (3.0 * lam - 2.0) * s_sum_exact(mu, 4, r) -
                           4.0 * lam * lam * s_sum_exact(mu, 3, r));
}

// ||G||^2 xi_1(G) Sigma_n^2
inline double xi_numerator_scaled(const WaveletParams& w) {
  const int mu = mu_of(w.lambda);
  const double lam = w.lambda;
  const double r = w.rho;
  const double e = std::exp(-r);
  const double zonal =
      r * r * e / ((2.0 * lam + 1.0) * (2.0 * lam + 1.0)) *
      (s_sum_exact(mu, 6, r) + (4.0 * lam + 3.0) * s_sum_exact(mu, 5, r) +
       (4.0 * lam * lam + 10.0 * lam + 3.0) * s_sum_exact(mu, 4, r) +
       (8.0 * lam * lam + 8.0 * lam + 1.0) * s_sum_exact(mu, 3, r) +
       (4.0 * lam * lam + 2.0 * lam) * s_sum_exact(mu, 2, r));
  const double tess = 8.0 * lam * (lam + 1.0) * r * r * e / ((2.0 * lam + 1.0) * (2.0 * lam + 3.0)) *
                      (s_sum_exact(mu + 2, 4, r) - s_sum_exact(mu + 2, 2, r));
  return 2.0 * (zonal + tess);
}

// ||G||^2 var_M(G) Sigma_n^2
inline double var_m_numerator_scaled(const WaveletParams& w) {
  const int mu = mu_of(w.lambda);
  const double lam = w.lambda;
  const double r = w.rho;
  return g_prefactor(w) *
         (3.0 * s_sum_exact(mu, 8, r) + 15.0 * lam * s_sum_exact(mu, 7, r) +
          4.0 * lam * (6.0 * lam - 1.0) * s_sum_exact(mu, 6, r) +
          12.0 * lam * lam * (lam - 1.0) * s_sum_exact(mu, 5, r) -
          8.0 * lam * lam * lam * s_sum_exact(mu, 4, r));
}

}  // namespace detail

/// ||G||^2 through the S sums.
inline double norm_sq_series(const WaveletParams& w) {
  detail::check_params(w);
  return detail::norm_sq_scaled(w) * detail::inv_sigma_sq(w.lambda);
}

/// Four-term expansion of ||G||^2 in rho, remainder O(rho^{-2 lambda-1}).
inline AsymptoticPolynomial norm_sq_asymptotic(double lambda) {
  detail::check_lambda_asymptotic(lambda);
  const double l = lambda;
  const double c = (l + 1.0) * detail::inv_sigma_sq(l) * std::pow(2.0, -2.0 * l);
  AsymptoticPolynomial a;
  a.leading_power = -2.0 * l - 5.0;
  a.coefficients = {
      c * 3.0 * (l + 2.0) * (l + 3.0) * (2.0 * l + 5.0) / 8.0,
      c * 3.0 * l * (l + 2.0) * (l + 2.0) * (2.0 * l + 5.0) / 4.0,
      c * l * (l + 2.0) * (2.0 * l + 3.0) * (6.0 * l * l + 11.0 * l - 3.0) / 8.0,
      c * l * l * (l + 1.0) * (2.0 * l + 3.0) * (2.0 * l * l + 3.0 * l - 3.0) / 4.0,
  };
  a.error_order = -2.0 * l - 1.0;
  return a;
}

/// Closed form of I_1 between the zonal harmonics of degrees l and l+1:
/// A_l^0 A_{l+1}^0 lambda^2 / ((l+lambda)(l+lambda+1)) binom(l+2 lambda, l).
inline double coupling_zonal_step(double lambda, std::int64_t l) {
  detail::check_lambda_g(lambda);
  const SphereDim d = SphereDim::from_lambda(lambda);
  const double ld = static_cast<double>(l);
  return std::exp(log_normalization(d, g_zonal_index(d, l)) +
                  log_normalization(d, g_zonal_index(d, l + 1)) + 2.0 * std::log(lambda) -
                  std::log(ld + lambda) - std::log(ld + lambda + 1.0) +
                  log_binomial(ld + 2.0 * lambda, l));
}

/// Closed form of I_1 between the harmonics of index (2,0,...,0) and degrees l, l+1 (l >= 2):
/// A_l^2 A_{l+1}^2 lambda (2 lambda-1)^2 (2 lambda+1) / (8 (lambda+1)(2 lambda+3)(l+lambda)(l+lambda+1))
///   binom(l+2 lambda+2, l) (l-1) l.
inline double coupling_tesseral_step(double lambda, std::int64_t l) {
  detail::check_lambda_g(lambda);
  if (l < 2) throw DomainError("tesseral index (2,0,...) needs degree >= 2");
  const SphereDim d = SphereDim::from_lambda(lambda);
  const double ld = static_cast<double>(l);
  const double lam = lambda;
  const double rational = lam * (2.0 * lam - 1.0) * (2.0 * lam - 1.0) * (2.0 * lam + 1.0) /
                          (8.0 * (lam + 1.0) * (2.0 * lam + 3.0) * (ld + lam) * (ld + lam + 1.0)) *
                          (ld - 1.0) * ld;
  return std::exp(log_normalization(d, g_tesseral_index(d, l)) +
                  log_normalization(d, g_tesseral_index(d, l + 1)) +
                  log_binomial(ld + 2.0 * lam + 2.0, l)) *
         rational;
}

/// xi_O(G) through the S sums; only the x_1 component is nonzero.
inline std::vector<double> gravity_center_G(const WaveletParams& w) {
  detail::check_params(w);
  const SphereDim d = SphereDim::from_lambda(w.lambda);
  std::vector<double> xi(static_cast<std::size_t>(d.ambient()), 0.0);
  xi[0] = detail::xi_numerator_scaled(w) / detail::norm_sq_scaled(w);
  return xi;
}

/// xi_O(G)_1 by summing the coefficient products against the two closed-form I_1 values.
inline double gravity_center_G_pairs(const WaveletParams& w, std::int64_t L) {
  detail::check_params(w);
  CompensatedSum<double> num, norm;
  auto prev = g_coefficient_pair(w, 1);
  norm += prev.first * prev.first;
  for (std::int64_t l = 1; l < L; ++l) {
    const auto cur = g_coefficient_pair(w, l + 1);
    norm += cur.first * cur.first + cur.second * cur.second;
    num += 2.0 * prev.first * cur.first * coupling_zonal_step(w.lambda, l);
    if (l >= 2) num += 2.0 * prev.second * cur.second * coupling_tesseral_step(w.lambda, l);
    prev = cur;
  }
  return num.value() / norm.value();
}

/// Expansion of the x_1 component of xi_O(G), remainder O(rho^4).
inline AsymptoticPolynomial xi_G_asymptotic(double lambda) {
  detail::check_lambda_asymptotic(lambda);
  const double l = lambda;
  AsymptoticPolynomial a;
  a.leading_power = 0.0;
  a.coefficients = {1.0, 0.0, -(0.5 - 4.0 / (l + 3.0) + 14.0 / (6.0 * l + 15.0)),
                    2.0 * l * l * (3.0 * l + 5.0) /
                        (3.0 * (l + 2.0) * (l + 3.0) * (l + 3.0) * (2.0 * l + 5.0))};
  a.error_order = 4.0;
  return a;
}

/// Expansion of var_S(G), remainder O(rho^4).
inline AsymptoticPolynomial var_s_G_asymptotic(double lambda) {
  detail::check_lambda_asymptotic(lambda);
  const double l = lambda;
  AsymptoticPolynomial a;
  a.leading_power = 2.0;
  a.coefficients = {(6.0 * l * l + 13.0 * l + 9.0) / (3.0 * (l + 3.0) * (2.0 * l + 5.0)),
                    -4.0 * l * l * (3.0 * l + 5.0) /
                        (3.0 * (l + 2.0) * (l + 3.0) * (l + 3.0) * (2.0 * l + 5.0))};
  a.error_order = 4.0;
  return a;
}

/// var_M(G) through the S sums.
inline double var_m_G(const WaveletParams& w) {
  detail::check_params(w);
  return detail::var_m_numerator_scaled(w) / detail::norm_sq_scaled(w);
}

/// Expansion of var_M(G), remainder O(rho^2).
inline AsymptoticPolynomial var_m_G_asymptotic(double lambda) {
  detail::check_lambda_asymptotic(lambda);
  const double l = lambda;
  const double l2 = l * l;
  const double l3 = l2 * l;
  const double l4 = l2 * l2;
  AsymptoticPolynomial a;
  a.leading_power = -2.0;
  a.coefficients = {
      (l + 4.0) * (2.0 * l + 7.0) / 2.0,
      l * (2.0 * l + 7.0) / (l + 3.0),
      -l * (4.0 * l4 - 8.0 * l3 - 189.0 * l2 - 492.0 * l - 351.0) /
          (6.0 * (l + 3.0) * (l + 3.0) * (2.0 * l + 5.0)),
      2.0 * l2 * (2.0 * l4 - 2.0 * l3 - 87.0 * l2 - 246.0 * l - 189.0) /
          (3.0 * (l + 2.0) * std::pow(l + 3.0, 3) * (2.0 * l + 5.0)),
  };
  a.error_order = 2.0;
  return a;
}

/// Expansion of U(G), remainder O(rho^2). Valid as a formula for real lambda > 0.
inline AsymptoticPolynomial u_G_expansion(double lambda) {
  if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
  const double l = lambda;
  const double q = 6.0 * l * l + 13.0 * l + 9.0;
  AsymptoticPolynomial a;
  a.leading_power = 0.0;
  a.coefficients = {
      std::sqrt((l + 4.0) * (2.0 * l + 7.0) * q / (6.0 * (l + 3.0) * (2.0 * l + 5.0))),
      -l * (9.0 * l * l + 5.0 * l - 18.0) / ((l + 2.0) * (l + 3.0)) *
          std::sqrt((2.0 * l + 7.0) / (6.0 * (l + 3.0) * (l + 4.0) * (2.0 * l + 5.0) * q)),
  };
  a.error_order = 2.0;
  return a;
}

inline AsymptoticPolynomial u_G_asymptotic(double lambda) {
  detail::check_lambda_asymptotic(lambda);
  return u_G_expansion(lambda);
}

/// lim_{rho -> 0} U(G) = sqrt((lambda+4)(2 lambda+7)(6 lambda^2+13 lambda+9) / (6 (lambda+3)(2 lambda+5))).
inline double u_limit(double lambda) {
  if (!(lambda >= 1.5) || !std::isfinite(lambda)) throw DomainError("u_limit requires lambda >= 3/2");
  return u_G_expansion(lambda).coefficients[0];
}

/// Exact report for G through the S sums.
inline UncertaintyReport uncertainty_G_series(const WaveletParams& w) {
  detail::check_params(w);
  const double nn = detail::norm_sq_scaled(w);
  const SphereDim d = SphereDim::from_lambda(w.lambda);
  std::vector<double> xi(static_cast<std::size_t>(d.ambient()), 0.0);
  xi[0] = detail::xi_numerator_scaled(w) / nn;
  return make_report(d, std::move(xi), detail::var_m_numerator_scaled(w) / nn);
}

/// Exact report for G through the generic machinery applied to its truncated expansion.
inline UncertaintyReport uncertainty_G(const WaveletParams& w, std::int64_t L) {
  return uncertainty_report(g_coefficients(w, L));
}

inline UncertaintyReport uncertainty_G(const WaveletParams& w) {
  return uncertainty_report(g_coefficients(w));
}

/// Relative part of ||G||^2 lost by truncating at degree L.
inline double g_tail_estimate(const WaveletParams& w, std::int64_t L) {
  const double full = norm_sq_series(w);
  const double part = g_coefficients(w, L).norm_sq();
  return std::fabs(full - part) / full;
}

/// rho -> 0 limits of var_S(G)/rho^2, rho^2 var_M(G) and U(G) by Richardson extrapolation.
struct GLimits {
  double var_s_over_rho2;
  double rho2_var_m;
  double u;
};

inline GLimits g_limits(double lambda, std::span<const double> grid) {
  detail::check_lambda_g(lambda);
  std::vector<double> a, b, c;
  for (double r : grid) {
    const auto rep = uncertainty_G_series({lambda, r});
    a.push_back(rep.var_s / (r * r));
    b.push_back(rep.var_m * r * r);
    c.push_back(rep.u);
  }
  return {richardson_limit(grid, a), richardson_limit(grid, b), richardson_limit(grid, c)};
}

inline GLimits g_limits(double lambda) {
  const auto g = default_limit_grid();
  return g_limits(lambda, g);
}

/// Zonal family g_l proportional to (rho l)^m e^{-rho l} (l+lambda)/lambda / A_l^0, l >= 1,
/// scaled so that the largest coefficient is 1.
inline std::vector<double> zonal_poisson_coefficients(double lambda, int m, double rho) {
  if (!is_half_integer(lambda) || lambda < 0.5) throw DomainError("lambda must be a half-integer >= 1/2");
  if (m < 1) throw DomainError("zonal family order m must be >= 1");
  detail::check_rho(rho);
  const SphereDim d = SphereDim::from_lambda(lambda);
  const double peak = (m + lambda) / rho;
  std::vector<double> logs{-std::numeric_limits<double>::infinity()};
  double best = -std::numeric_limits<double>::infinity();
  double weighted = 0.0;  // sum l (l + 2 lambda) g_l^2 in units of e^{2 best}
  for (std::int64_t l = 1;; ++l) {
    if (l > kMaxSeriesTerms) throw ConvergenceError("zonal family did not converge");
    const double ld = static_cast<double>(l);
    const double lg = m * std::log(rho * ld) - rho * ld + std::log((ld + lambda) / lambda) -
                      log_normalization(d, MultiIndex::zonal(d, l));
    logs.push_back(lg);
    if (lg > best) {
      weighted = std::isfinite(best) ? weighted * std::exp(2.0 * (best - lg)) : 0.0;
      best = lg;
    }
    const double t = std::exp(2.0 * (lg - best)) * ld * (ld + 2.0 * lambda);
    weighted += t;
    if (ld > 2.0 * peak + 10.0 && t < 1e-20 * weighted) break;
  }
  std::vector<double> c(logs.size());
  for (std::size_t l = 0; l < logs.size(); ++l) c[l] = std::exp(logs[l] - best);
  return c;
}

inline UncertaintyReport zonal_uncertainty(double lambda, int m, double rho) {
  return uncertainty_report_zonal(SphereDim::from_lambda(lambda),
                                  zonal_poisson_coefficients(lambda, m, rho));
}

/// lim_{rho -> 0} U of the zonal family of order m, by Richardson extrapolation.
inline double zonal_u_limit(double lambda, int m, std::span<const double> grid) {
  std::vector<double> u;
  for (double r : grid) u.push_back(zonal_uncertainty(lambda, m, r).u);
  return richardson_limit(grid, u);
}

struct ZonalMinimum {
  double value;
  int m;
};

/// Minimum over m in 1..ceil(lambda)+2 of the zonal limiting uncertainty.
inline ZonalMinimum zonal_min_limit(double lambda, std::span<const double> grid) {
  ZonalMinimum best{std::numeric_limits<double>::infinity(), 0};
  const int top = static_cast<int>(std::ceil(lambda)) + 2;
  for (int m = 1; m <= top; ++m) {
    const double v = zonal_u_limit(lambda, m, grid);
    if (std::isfinite(v) && v < best.value) best = {v, m};
  }
  if (best.m == 0) throw ConvergenceError("no finite zonal limit");
  return best;
}

struct RatioPoint {
  double lambda;
  double u_limit;
  double zonal_min;
  int zonal_argmin;
  double ratio;
};

/// Runs body(i) for i in [0, count) on up to hardware_concurrency threads.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// u_limit(lambda) over the minimal zonal limiting value, per lambda.
inline std::vector<RatioPoint> ratio_curve(std::span<const double> lambdas, std::span<const double> grid) {
  for (double l : lambdas) {
    if (!is_half_integer(l) || l < 2.0) throw DomainError("ratio curve needs half-integer lambda >= 2");
  }
  std::vector<RatioPoint> out(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t i) {
    const double l = lambdas[i];
    const auto zm = zonal_min_limit(l, grid);
    const double ul = u_limit(l);
    out[i] = {l, ul, zm.value, zm.m, ul / zm.value};
  });
  return out;
}

inline std::vector<RatioPoint> ratio_curve(std::span<const double> lambdas) {
  const auto g = default_limit_grid();
  return ratio_curve(lambdas, g);
}

}  // namespace hsu
