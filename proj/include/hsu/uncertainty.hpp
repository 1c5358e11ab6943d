#pragma once

// Space and momentum localization of functions on S^n from their Fourier coefficients.
//
// The gravity center is a sum over pairs of coefficients whose indices are nu-conjugate:
// the first nu entries of (k_0, ..., k_{n-1}) differ by exactly one and the remaining
// entries agree. Only such pairs have a nonvanishing coupling integral
//   I(k, m) = int x conj(Y_k) Y_m d(sigma),
// which factors into the single theta and phi integrals of special_functions.hpp.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hsu/errors.hpp"
#include "hsu/numeric.hpp"
#include "hsu/special_functions.hpp"
#include "hsu/sphere_core.hpp"

namespace hsu {

using Complex = std::complex<double>;

/// Sparse Fourier expansion F = sum F_l^k Y_l^k, ordered by ascending degree.
class FourierExpansion {
 public:
  using Map = std::map<MultiIndex, Complex>;

  explicit FourierExpansion(SphereDim d) : dim_(d) {}

  /// Inserts a coefficient; rejects invalid or duplicate indices.
  void add(MultiIndex idx, Complex value) {
    require_valid(dim_, idx);
    auto [it, inserted] = coeffs_.emplace(std::move(idx), value);
    if (!inserted) throw InputError("duplicate coefficient index " + it->first.str());
  }

  const SphereDim& dim() const { return dim_; }
  const Map& coefficients() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  bool empty() const { return coeffs_.empty(); }

  std::int64_t max_degree() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first.l; }

  const Complex* find(const MultiIndex& idx) const {
    auto it = coeffs_.find(idx);
    return it == coeffs_.end() ? nullptr : &it->second;
  }

  /// True if some stored index starts with (prefix_0, ..., prefix_{len-1}).
  bool has_prefix(const MultiIndex& probe, std::size_t len) const {
    MultiIndex lo = probe;
    for (std::size_t j = std::max<std::size_t>(len, 1); j < lo.size(); ++j) {
      lo.k[j - 1] = std::numeric_limits<std::int64_t>::min();
    }
    auto it = coeffs_.lower_bound(lo);
    if (it == coeffs_.end()) return false;
    for (std::size_t j = 0; j < len; ++j) {
      if (it->first.at(j) != probe.at(j)) return false;
    }
    return true;
  }

  /// Squared L2 norm by Parseval.
  double norm_sq() const {
    CompensatedSum<double> s;
    for (const auto& [idx, c] : coeffs_) s += std::norm(c);
    return s.value();
  }

  FourierExpansion scaled(Complex c) const {
    FourierExpansion out(dim_);
    for (const auto& [idx, v] : coeffs_) out.coeffs_.emplace(idx, c * v);
    return out;
  }

  /// Pointwise value sum F_l^k Y_l^k(p).
  Complex evaluate(const SpherePoint& p) const {
    Complex s = 0.0;
    for (const auto& [idx, c] : coeffs_) s += c * eval_harmonic(dim_, idx, p);
    return s;
  }

  /// Pointwise value of the Laplace-Beltrami image, applied through the eigenvalues.
  Complex evaluate_laplacian(const SpherePoint& p) const {
    Complex s = 0.0;
    for (const auto& [idx, c] : coeffs_) {
      s += laplace_eigenvalue(dim_, idx.l) * c * eval_harmonic(dim_, idx, p);
    }
    return s;
  }

 private:
  SphereDim dim_;
  Map coeffs_;
};

/// Two indices (k_0..k_{n-1}) and (m_0..m_{n-1}) with m_i = k_i +- 1 for i < nu and
/// m_i = k_i for i >= nu.
struct ConjugatePair {
  MultiIndex k;
  MultiIndex m;
  int nu;
};

/// The nu for which (k, m) are nu-conjugate, or nullopt.
inline std::optional<int> conjugacy_order(const MultiIndex& k, const MultiIndex& m) {
  if (k.size() != m.size()) return std::nullopt;
  const std::size_t len = k.size();
  std::size_t nu = 0;
  while (nu < len) {
    const std::int64_t d = m.at(nu) - k.at(nu);
    if (d != 1 && d != -1) break;
    ++nu;
  }
  if (nu == 0) return std::nullopt;
  for (std::size_t j = nu; j < len; ++j) {
    if (m.at(j) != k.at(j)) return std::nullopt;
  }
  return static_cast<int>(nu);
}

/// Visits every ordered pair (k, m) of stored indices that is nu-conjugate, driven by the
/// coefficient support. With ascending_only, only pairs with m_0 = k_0 + 1 are visited.
template <typename Visit>
void for_each_conjugate_pair(const FourierExpansion& f, Visit&& visit, bool ascending_only = false) {
  const std::size_t len = static_cast<std::size_t>(f.dim().n());
  for (const auto& [k, fk] : f.coefficients()) {
    MultiIndex m = k;
    // depth j: entries 0..j-1 of m already stepped by +-1
    std::function<void(std::size_t)> rec = [&](std::size_t j) {
      if (j >= 1) {
        // stop here: nu = j, remaining entries equal to k
        if (const Complex* fm = f.find(m)) visit(k, fk, m, *fm, static_cast<int>(j));
      }
      if (j == len) return;
      const std::int64_t kj = k.at(j);
      for (int step : {-1, 1}) {
        if (ascending_only && j == 0 && step < 0) continue;
        const std::int64_t v = kj + step;
        if (j + 1 < len && v < 0) continue;
        if (j == 0) m.l = v; else m.k[j - 1] = v;
        if (f.has_prefix(m, j + 1)) rec(j + 1);
      }
      if (j == 0) m.l = kj; else m.k[j - 1] = kj;
    };
    rec(0);
  }
}

/// All ordered nu-conjugate pairs of indices present in f.
inline std::vector<ConjugatePair> conjugate_pairs(const FourierExpansion& f) {
  std::vector<ConjugatePair> out;
  for_each_conjugate_pair(f, [&](const MultiIndex& k, Complex, const MultiIndex& m, Complex, int nu) {
    out.push_back({k, m, nu});
  });
  return out;
}

/// Evaluates coupling integrals for one sphere dimension. Holds precomputed log factors
/// for axes on which both indices vanish, so high-dimensional zonal-like indices cost
/// O(position of the last nonzero entry) rather than O(n).
class CouplingIntegrator {
 public:
  explicit CouplingIntegrator(SphereDim d) : dim_(d) {
    const int n = d.n();
    log_sigma_ = log_surface_constant(d);
    // suffix sums over axes iota..n-1 of the all-zero factors
    zero_norm_suffix_.assign(static_cast<std::size_t>(n + 1), 0.0);
    zero_theta1_suffix_.assign(static_cast<std::size_t>(n + 1), 0.0);
    for (int iota = n - 1; iota >= 1; --iota) {
      zero_norm_suffix_[iota] = zero_norm_suffix_[iota + 1] + detail::log_norm_factor(n, iota, 0, 0);
      zero_theta1_suffix_[iota] =
          zero_theta1_suffix_[iota + 1] + detail::theta_1_diag(n, iota, 0, 0).log_abs;
    }
  }

  const SphereDim& dim() const { return dim_; }

  /// log A_l^k using the zero-tail tables.
  double log_norm(const MultiIndex& idx) const {
    const int n = dim_.n();
    const int tail = zero_tail_start(idx);
    double s = -log_gamma(0.5 * (n + 1));
    for (int tau = 1; tau < tail; ++tau) {
      s += detail::log_norm_factor(n, tau, detail::axis_value(idx, tau - 1),
                                   detail::axis_value(idx, tau));
    }
    s += zero_norm_suffix_[tail];
    return 0.5 * s;
  }

  /// Components of I(k, m) in R^{n+1} (complex in general). Throws for non-conjugate pairs.
  std::vector<Complex> operator()(const MultiIndex& k, const MultiIndex& m) const {
    const auto nu = conjugacy_order(k, m);
    if (!nu) throw DomainError("coupling integral requested for non-conjugate pair " + k.str() + " / " + m.str());
    return evaluate(k, m, *nu);
  }

  std::vector<Complex> evaluate(const MultiIndex& k, const MultiIndex& m, int nu) const {
    const int n = dim_.n();
    std::vector<Complex> out(static_cast<std::size_t>(n + 1), 0.0);
    SignedLog acc{1, log_norm(k) + log_norm(m) - log_sigma_};
    for (int iota = 1; iota < std::min(nu, n); ++iota) acc *= theta_s(k, m, iota);
    if (nu < n) {
      acc *= detail::theta_c_log(args(k, m, nu), n);
      const int tail = std::max({nu + 1, zero_tail_start(k), zero_tail_start(m)});
      for (int iota = nu + 1; iota < tail; ++iota) {
        acc *= detail::theta_1_log(args(k, m, iota), n);
      }
      acc.log_abs += zero_theta1_suffix_[tail];
      const Complex phi = phi_integral(PhiKind::One, m.k.back() - k.k.back());
      out[nu - 1] = acc.value() * phi;
      return out;
    }
    const std::int64_t d = m.k.back() - k.k.back();
    const double base = acc.value();
    out[n - 1] = base * phi_integral(PhiKind::Cos, d);
    out[n] = base * phi_integral(PhiKind::Sin, d);
    return out;
  }

 private:
  static ThetaIntegralArgs args(const MultiIndex& k, const MultiIndex& m, int iota) {
    return {iota, detail::axis_value(k, iota - 1), detail::axis_value(k, iota),
            detail::axis_value(m, iota - 1), detail::axis_value(m, iota)};
  }
  SignedLog theta_s(const MultiIndex& k, const MultiIndex& m, int iota) const {
    return detail::theta_s_log(args(k, m, iota), dim_.n());
  }
  // Smallest axis tau such that k_{tau-1} = ... = k_{n-1} = 0 (n if none).
  int zero_tail_start(const MultiIndex& idx) const {
    const int n = dim_.n();
    int j = n - 1;
    while (j >= 0 && idx.at(static_cast<std::size_t>(j)) == 0) --j;
    // entries j+1..n-1 vanish; axis tau uses entries tau-1, tau
    return std::max(1, std::min(n, j + 2));
  }

  SphereDim dim_;
  double log_sigma_ = 0.0;
  std::vector<double> zero_norm_suffix_;
  std::vector<double> zero_theta1_suffix_;
};

/// I(k, m) for a nu-conjugate pair.
inline std::vector<Complex> coupling_integral(const SphereDim& d, const ConjugatePair& pair) {
  const auto nu = conjugacy_order(pair.k, pair.m);
  if (!nu || *nu != pair.nu) {
    throw DomainError("coupling integral requested for non-conjugate pair");
  }
  require_valid(d, pair.k);
  require_valid(d, pair.m);
  return CouplingIntegrator(d).evaluate(pair.k, pair.m, pair.nu);
}

namespace detail {

inline double checked_norm_sq(const FourierExpansion& f) {
  const double nn = f.norm_sq();
  if (!(nn > 0.0)) throw ZeroNormError();
  return nn;
}

}  // namespace detail

/// xi_O(F) as a complex vector, summing every ordered conjugate pair. The imaginary parts
/// vanish up to rounding; used to check Hermitian symmetry of the pair sum.
inline std::vector<Complex> gravity_center_complex(const FourierExpansion& f) {
  const double nn = detail::checked_norm_sq(f);
  const CouplingIntegrator integ(f.dim());
  const std::size_t dim = static_cast<std::size_t>(f.dim().ambient());
  std::vector<CompensatedSum<double>> re(dim), im(dim);
  for_each_conjugate_pair(f, [&](const MultiIndex& k, Complex fk, const MultiIndex& m, Complex fm, int nu) {
    const auto comp = integ.evaluate(k, m, nu);
    const Complex w = std::conj(fk) * fm;
    for (std::size_t i = 0; i < dim; ++i) {
      if (comp[i] == Complex(0.0)) continue;
      const Complex t = w * comp[i];
      re[i] += t.real();
      im[i] += t.imag();
    }
  });
  std::vector<Complex> xi(dim);
  for (std::size_t i = 0; i < dim; ++i) xi[i] = Complex(re[i].value(), im[i].value()) / nn;
  return xi;
}

/// xi_O(F) = (1/||F||^2) sum over conjugate pairs conj(F_k) F_m I(k, m). Pairs (k, m) and
/// (m, k) contribute complex conjugates, so only m_0 = k_0 + 1 is visited and doubled.
inline std::vector<double> gravity_center(const FourierExpansion& f) {
  const double nn = detail::checked_norm_sq(f);
  const CouplingIntegrator integ(f.dim());
  const std::size_t dim = static_cast<std::size_t>(f.dim().ambient());
  std::vector<CompensatedSum<double>> acc(dim);
  for_each_conjugate_pair(
      f,
      [&](const MultiIndex& k, Complex fk, const MultiIndex& m, Complex fm, int nu) {
        const auto comp = integ.evaluate(k, m, nu);
        const Complex w = std::conj(fk) * fm;
        for (std::size_t i = 0; i < dim; ++i) {
          if (comp[i] != Complex(0.0)) acc[i] += 2.0 * (w * comp[i]).real();
        }
      },
      /*ascending_only=*/true);
  std::vector<double> xi(dim);
  for (std::size_t i = 0; i < dim; ++i) xi[i] = acc[i].value() / nn;
  return xi;
}

/// var_M(F) = sum l (l + 2 lambda) |F_l^k|^2 / ||F||^2.
inline double momentum_variance(const FourierExpansion& f) {
  const double nn = detail::checked_norm_sq(f);
  CompensatedSum<double> s;
  for (const auto& [idx, c] : f.coefficients()) s += -laplace_eigenvalue(f.dim(), idx.l) * std::norm(c);
  return s.value() / nn;
}

struct UncertaintyReport {
  std::vector<double> xi;  // gravity center, n+1 components
  double norm_xi = 0.0;
  double var_s = 0.0;
  double var_m = 0.0;
  double u = 0.0;
  double bound = 0.0;  // n/2
  bool bound_ok = false;
};

inline constexpr double kBoundTolerance = 1e-12;

/// Assembles var_S = (1 - |xi|^2) / |xi|^2 and U = sqrt(var_S var_M).
inline UncertaintyReport make_report(const SphereDim& d, std::vector<double> xi, double var_m) {
  UncertaintyReport r;
  double n2 = 0.0;
  for (double v : xi) n2 += v * v;
  if (!(n2 >= 1e-300)) throw ZeroGravityCenterError();
  r.xi = std::move(xi);
  r.norm_xi = std::sqrt(n2);
  r.var_s = (1.0 - n2) / n2;
  r.var_m = var_m;
  r.u = std::sqrt(r.var_s) * std::sqrt(r.var_m);
  r.bound = 0.5 * d.n();
  r.bound_ok = r.u >= r.bound - kBoundTolerance;
  return r;
}

inline UncertaintyReport uncertainty_report(const FourierExpansion& f) {
  auto xi = gravity_center(f);
  return make_report(f.dim(), std::move(xi), momentum_variance(f));
}

/// Report for a real zonal function with coefficient c[l] on Y_l^{(0,...,0)}. Only pairs of
/// consecutive degrees are 1-conjugate, so the gravity center lies on the x_1-axis.
inline UncertaintyReport uncertainty_report_zonal(const SphereDim& d, const std::vector<double>& c) {
  CompensatedSum<double> norm, mom, x1;
  for (std::size_t l = 0; l < c.size(); ++l) {
    const double w = c[l] * c[l];
    norm += w;
    mom += -laplace_eigenvalue(d, static_cast<std::int64_t>(l)) * w;
  }
  const double nn = norm.value();
  if (!(nn > 0.0)) throw ZeroNormError();
  const CouplingIntegrator integ(d);
  MultiIndex k = MultiIndex::zonal(d, 0);
  MultiIndex m = MultiIndex::zonal(d, 1);
  for (std::size_t l = 0; l + 1 < c.size(); ++l) {
    k.l = static_cast<std::int64_t>(l);
    m.l = k.l + 1;
    if (c[l] == 0.0 || c[l + 1] == 0.0) continue;
    x1 += 2.0 * c[l] * c[l + 1] * integ.evaluate(k, m, 1)[0].real();
  }
  std::vector<double> xi(static_cast<std::size_t>(d.ambient()), 0.0);
  xi[0] = x1.value() / nn;
  return make_report(d, std::move(xi), mom.value() / nn);
}

}  // namespace hsu
