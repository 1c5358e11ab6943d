#pragma once

// Self-check suite behind `hsu verify`: closed forms against quadrature, series against
// direct integration, the uncertainty bound and the wavelet expansions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hsu/poisson_directional.hpp"
#include "hsu/quadrature.hpp"
#include "hsu/special_functions.hpp"
#include "hsu/sphere_core.hpp"
#include "hsu/uncertainty.hpp"

namespace hsu {

enum class VerifyLevel { Quick, Full };

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 20240601;
  VerifyLevel level = VerifyLevel::Full;
  std::int64_t max_nodes = kDefaultMaxNodes;
};

namespace verify_detail {

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline double rel(double a, double b) {
  const double s = std::max(std::fabs(a), std::fabs(b));
  return s == 0.0 ? 0.0 : std::fabs(a - b) / s;
}

// Gauss-Jacobi quadrature of the theta integrand; exact when the sine power absorbs into the
// weight and the rest is polynomial.
inline double theta_quadrature(int kind, int n, int iota, std::int64_t a, std::int64_t b,
                               std::int64_t c, std::int64_t d) {
  const double h = 0.5 * (n - iota);
  int p = static_cast<int>(b + d) + n - iota + (kind == 2 ? 1 : 0);
  const double alpha = 0.5 * (p - 1);
  const auto rule = gauss_jacobi(24, alpha, alpha);
  CompensatedSum<double> s;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double t = rule.nodes[j];
    double v = gegenbauer_eval({h + static_cast<double>(b), a - b}, t) *
               gegenbauer_eval({h + static_cast<double>(d), c - d}, t);
    if (kind == 1) v *= t;
    s += rule.weights[j] * v;
  }
  return s.value();
}

inline MultiIndex random_index(const SphereDim& d, int max_l, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> ld(0, max_l);
  const auto all = enumerate_indices(d, ld(rng));
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  return all[pick(rng)];
}

inline FourierExpansion random_function(const SphereDim& d, int max_l, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::bernoulli_distribution keep(0.7);
  FourierExpansion f(d);
  for (int l = 0; l <= max_l; ++l) {
    for (auto& idx : enumerate_indices(d, l)) {
      const double re = g(rng), im = g(rng);
      if (keep(rng)) f.add(idx, {re, im});
    }
  }
  if (f.size() < 2) {
    if (!f.find(MultiIndex::zonal(d, 0))) f.add(MultiIndex::zonal(d, 0), 1.0);
    if (!f.find(MultiIndex::zonal(d, 1))) f.add(MultiIndex::zonal(d, 1), 0.5);
  }
  return f;
}

inline std::vector<Complex> coupling_quadrature(const QuadratureGrid& g, const MultiIndex& k,
                                                const MultiIndex& m) {
  const SphereDim& d = g.dim();
  const std::size_t dim = static_cast<std::size_t>(d.ambient());
  std::vector<CompensatedSum<double>> re(dim), im(dim);
  g.for_each_node([&](const SpherePoint& p, double w) {
    const Complex v = std::conj(eval_harmonic(d, k, p)) * eval_harmonic(d, m, p) * w;
    const auto& x = p.cartesian();
    for (std::size_t i = 0; i < dim; ++i) {
      re[i] += v.real() * x[i];
      im[i] += v.imag() * x[i];
    }
  });
  std::vector<Complex> out(dim);
  for (std::size_t i = 0; i < dim; ++i) out[i] = {re[i].value(), im[i].value()};
  return out;
}

inline double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  // least-squares slope of log y against log x
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace verify_detail

inline CheckResult check_theta_closed_forms(const VerifyOptions& o) {
  using namespace verify_detail;
  const int max_n = o.level == VerifyLevel::Quick ? 4 : 6;
  const int max_idx = o.level == VerifyLevel::Quick ? 4 : 6;
  double worst = 0.0;
  int count = 0;
  for (int n = 2; n <= max_n; ++n) {
    for (int iota = 1; iota <= n - 1; ++iota) {
      for (int a = 0; a <= max_idx; ++a)
        for (int b = 0; b <= a; ++b)
          for (int c = 0; c <= max_idx; ++c)
            for (int d = 0; d <= c; ++d) {
              const ThetaIntegralArgs args{iota, a, b, c, d};
              const double scale = std::exp(detail::theta_1_diag(n, iota, a, b).log_abs);
              auto cmp = [&](int kind, double closed) {
                const double q = theta_quadrature(kind, n, iota, a, b, c, d);
                const double e = closed == 0.0 ? std::fabs(q) / scale : rel(closed, q);
                worst = std::max(worst, e);
                ++count;
              };
              if (b == d) {
                cmp(0, theta_integral_1(args, n));
                cmp(1, theta_integral_c(args, n));
              }
              if (d == b + 1 || b == d + 1) cmp(2, theta_integral_s(args, n));
            }
    }
  }
  return {"theta_closed_forms", worst <= 1e-10,
          std::to_string(count) + " integrals, max rel err " + fmt("%.2e", worst)};
}

inline CheckResult check_phi_integrals(const VerifyOptions&) {
  using namespace verify_detail;
  double worst = 0.0;
  const int pts = 32;
  for (int d = -4; d <= 4; ++d) {
    for (PhiKind kind : {PhiKind::One, PhiKind::Cos, PhiKind::Sin}) {
      Complex s = 0.0;
      for (int j = 0; j < pts; ++j) {
        const double phi = 2.0 * std::numbers::pi * j / pts;
        const double w = kind == PhiKind::One ? 1.0 : kind == PhiKind::Cos ? std::cos(phi) : std::sin(phi);
        s += std::polar(1.0, d * phi) * w * (2.0 * std::numbers::pi / pts);
      }
      worst = std::max(worst, std::abs(s - phi_integral(kind, d)));
    }
  }
  return {"phi_integrals", worst <= 1e-12, "max abs err " + fmt("%.2e", worst)};
}

inline CheckResult check_orthonormality(const VerifyOptions& o) {
  using namespace verify_detail;
  const int max_l = o.level == VerifyLevel::Quick ? 2 : 4;
  const int max_n = o.level == VerifyLevel::Quick ? 3 : 4;
  double worst = 0.0;
  for (int n = 2; n <= max_n; ++n) {
    const SphereDim d(n);
    const auto grid = build_grid(d, 2 * max_l, o.max_nodes);
    std::vector<MultiIndex> idx;
    for (int l = 0; l <= max_l; ++l) {
      for (auto& m : enumerate_indices(d, l)) idx.push_back(m);
    }
    const std::size_t N = idx.size();
    std::vector<Complex> gram(N * N, 0.0);
    std::vector<Complex> vals(N);
    grid.for_each_node([&](const SpherePoint& p, double w) {
      for (std::size_t i = 0; i < N; ++i) vals[i] = eval_harmonic(d, idx[i], p);
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) gram[i * N + j] += w * std::conj(vals[i]) * vals[j];
    });
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j)
        worst = std::max(worst, std::abs(gram[i * N + j] - (i == j ? 1.0 : 0.0)));
  }
  return {"basis_orthonormality", worst <= 1e-9, "max Gram deviation " + fmt("%.2e", worst)};
}

inline CheckResult check_structure_theorem(const VerifyOptions& o) {
  using namespace verify_detail;
  std::mt19937_64 rng(o.seed ^ 0x51ull);
  const int trials = o.level == VerifyLevel::Quick ? 60 : 500;
  const int max_l = 4;
  double worst_zero = 0.0, worst_match = 0.0;
  int violating = 0, conforming = 0;
  bool pattern_ok = true;
  for (int n = 2; n <= 3; ++n) {
    const SphereDim d(n);
    const auto grid = build_grid(d, 2 * max_l + 1, o.max_nodes);
    const CouplingIntegrator integ(d);
    for (int t = 0; t < trials / 2; ++t) {
      const MultiIndex k = random_index(d, max_l, rng);
      MultiIndex m = random_index(d, max_l, rng);
      // every third trial, force a conjugate pair
      if (t % 3 == 0) {
        std::uniform_int_distribution<int> nud(1, n);
        const int nu = nud(rng);
        MultiIndex c = k;
        std::bernoulli_distribution up(0.5);
        for (int j = 0; j < nu; ++j) {
          const std::int64_t v = k.at(j) + (up(rng) ? 1 : -1);
          if (j == 0) c.l = v; else c.k[j - 1] = v;
        }
        if (c.l >= 0 && c.l <= max_l && c.valid_for(d)) m = c;
      }
      const auto q = coupling_quadrature(grid, k, m);
      const auto nu = conjugacy_order(k, m);
      if (!nu) {
        ++violating;
        for (const auto& v : q) worst_zero = std::max(worst_zero, std::abs(v));
        continue;
      }
      ++conforming;
      const auto cf = integ.evaluate(k, m, *nu);
      for (std::size_t i = 0; i < q.size(); ++i) {
        worst_match = std::max(worst_match, std::abs(q[i] - cf[i]));
        const bool predicted = *nu < n ? static_cast<int>(i) == *nu - 1 : static_cast<int>(i) >= n - 1;
        if (!predicted && std::abs(q[i]) > 1e-10) pattern_ok = false;
        if (predicted && std::abs(cf[i]) < 1e-12) pattern_ok = false;
      }
    }
  }
  const bool ok = worst_zero <= 1e-10 && worst_match <= 1e-10 && pattern_ok;
  return {"structure_theorem", ok,
          std::to_string(violating) + " violating, " + std::to_string(conforming) +
              " conforming pairs, max |I| off-structure " + fmt("%.2e", worst_zero) +
              ", max closed-form error " + fmt("%.2e", worst_match)};
}

inline CheckResult check_series_vs_oracle(const VerifyOptions& o) {
  using namespace verify_detail;
  std::mt19937_64 rng(o.seed ^ 0x52ull);
  const int count = o.level == VerifyLevel::Quick ? 6 : 50;
  const int max_l = o.level == VerifyLevel::Quick ? 3 : 5;
  double worst = 0.0;
  for (int n = 2; n <= 3; ++n) {
    const SphereDim d(n);
    const auto grid = build_grid(d, 2 * max_l + 1, o.max_nodes);
    for (int t = 0; t < count / 2; ++t) {
      std::uniform_int_distribution<int> ld(1, max_l);
      const auto f = random_function(d, ld(rng), rng);
      const PointFunction fv = [&](const SpherePoint& p) { return f.evaluate(p); };
      const PointFunction lv = [&](const SpherePoint& p) { return f.evaluate_laplacian(p); };
      const auto xq = gravity_center_direct(grid, fv);
      const auto xs = gravity_center(f);
      for (std::size_t i = 0; i < xq.size(); ++i) worst = std::max(worst, std::fabs(xq[i] - xs[i]));
      worst = std::max(worst, std::fabs(momentum_direct(grid, fv, lv) - momentum_variance(f)));
    }
  }
  return {"series_vs_oracle", worst <= 1e-9, std::to_string(count) + " functions, max abs err " + fmt("%.2e", worst)};
}

inline CheckResult check_uncertainty_bound(const VerifyOptions& o) {
  using namespace verify_detail;
  std::mt19937_64 rng(o.seed ^ 0x53ull);
  const int count = o.level == VerifyLevel::Quick ? 30 : 200;
  double margin = std::numeric_limits<double>::infinity();
  int tested = 0;
  for (int t = 0; t < count; ++t) {
    const SphereDim d(2 + t % 3);
    std::uniform_int_distribution<int> ld(1, 5);
    const auto f = random_function(d, ld(rng), rng);
    try {
      const auto r = uncertainty_report(f);
      margin = std::min(margin, r.u - r.bound);
      ++tested;
    } catch (const ZeroGravityCenterError&) {
    }
  }
  return {"uncertainty_bound", margin >= -kBoundTolerance,
          std::to_string(tested) + " functions, min U - n/2 = " + fmt("%.6g", margin)};
}

inline CheckResult check_s_sum_asymptotics(const VerifyOptions&) {
  using namespace verify_detail;
  const std::vector<double> rhos{0.16, 0.08, 0.04, 0.02, 0.01};
  double worst = 0.0;
  std::string detail;
  for (auto [mu, m] : {std::pair{4, 3}, std::pair{4, 6}, std::pair{6, 8}}) {
    const auto a = s_sum_asymptotic(mu, m);
    std::vector<double> err;
    for (double r : rhos) err.push_back(std::fabs(s_sum_exact(mu, m, r) - a.eval(r)));
    const double slope = log_log_slope(rhos, err);
    worst = std::max(worst, std::fabs(slope - a.error_order));
    detail += (detail.empty() ? "" : ", ") + std::string("slope ") + fmt("%.3f", slope) + " vs " +
              fmt("%.0f", a.error_order);
  }
  return {"s_sum_asymptotics", worst <= 0.3, detail};
}

inline CheckResult check_double_path(const VerifyOptions& o) {
  using namespace verify_detail;
  double worst = 0.0;
  const std::vector<double> lams = o.level == VerifyLevel::Quick ? std::vector<double>{1.0, 2.0}
                                                                 : std::vector<double>{1.0, 1.5, 2.0, 2.5};
  for (double lam : lams) {
    for (double rho : {0.5, 0.2, 0.1}) {
      const WaveletParams w{lam, rho};
      const auto f = g_coefficients(w);
      const auto gen = uncertainty_report(f);
      worst = std::max({worst, rel(f.norm_sq(), norm_sq_series(w)), rel(gen.xi[0], gravity_center_G(w)[0]),
                        rel(gen.var_m, var_m_G(w))});
    }
  }
  return {"double_path_G", worst <= 1e-10, "max rel diff " + fmt("%.2e", worst)};
}

inline CheckResult check_g_limits(const VerifyOptions&) {
  using namespace verify_detail;
  const auto lim = g_limits(2.0);
  const double e1 = rel(lim.rho2_var_m, 33.0);
  const double e2 = rel(lim.var_s_over_rho2, 59.0 / 135.0);
  const double e3 = rel(lim.u, u_limit(2.0));
  const double worst = std::max({e1, e2, e3});
  return {"g_limits", worst <= 1e-3, "max rel err " + fmt("%.2e", worst)};
}

inline CheckResult check_large_lambda(const VerifyOptions&) {
  using namespace verify_detail;
  const double g10 = std::fabs(u_limit(10) - 10 - 25.0 / 12);
  const double g20 = std::fabs(u_limit(20) - 20 - 25.0 / 12);
  const double g40 = std::fabs(u_limit(40) - 40 - 25.0 / 12);
  const double r1 = g10 / g20, r2 = g20 / g40;
  const bool ok = r1 >= 1.6 && r1 <= 2.4 && r2 >= 1.6 && r2 <= 2.4;
  return {"large_lambda_gap", ok, "gap ratios " + fmt("%.3f", r1) + ", " + fmt("%.3f", r2)};
}

inline CheckResult check_ratio_curve(const VerifyOptions& o) {
  std::vector<double> lams;
  const double step = o.level == VerifyLevel::Quick ? 2.0 : 0.5;
  for (double l = 2.0; l <= 20.0 + 1e-9; l += step) lams.push_back(l);
  const auto rc = ratio_curve(lams);
  bool ok = true;
  for (std::size_t i = 0; i < rc.size(); ++i) {
    if (!(rc[i].ratio > 1.0)) ok = false;
    if (i > 0 && !(rc[i].ratio < rc[i - 1].ratio)) ok = false;
  }
  return {"ratio_curve", ok,
          std::to_string(rc.size()) + " points, ratio " + verify_detail::fmt("%.4f", rc.front().ratio) + " -> " +
              verify_detail::fmt("%.4f", rc.back().ratio)};
}

inline std::vector<std::function<CheckResult(const VerifyOptions&)>> verification_checks() {
  return {check_theta_closed_forms, check_phi_integrals,     check_orthonormality,
          check_structure_theorem,  check_series_vs_oracle,  check_uncertainty_bound,
          check_s_sum_asymptotics,  check_double_path,       check_g_limits,
          check_large_lambda,       check_ratio_curve};
}

inline std::vector<CheckResult> run_verification(const VerifyOptions& o) {
  std::vector<CheckResult> out;
  for (const auto& c : verification_checks()) out.push_back(c(o));
  return out;
}

}  // namespace hsu
