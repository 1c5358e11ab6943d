#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"

using namespace hsu;
using hsu::testing::rel_err;

namespace {

// ||G||^2 summed from the coefficient definition with an independent A_l^0 and beta.
double norm_sq_from_coefficients(double lam, double rho) {
  const SphereDim d = SphereDim::from_lambda(lam);
  const double sigma = surface_constant(d);
  double s = 0.0;
  for (int l = 1; l < 200000; ++l) {
    const double a0sq = std::exp(std::lgamma(2.0 * lam) + std::lgamma(l + 1.0) - std::lgamma(l + 2.0 * lam)) *
                        (l + lam) / lam;
    const double b0sq = (2.0 * lam - 1.0) * l * (l + 2.0 * lam) / ((2.0 * lam - 1.0) * (2.0 * lam + 1.0));
    const double b1sq = 2.0 * (2.0 * lam) * (l - 1.0) * (l + 2.0 * lam + 1.0) / ((2.0 * lam + 1.0) * (2.0 * lam + 3.0));
    const double base = (l + lam) / lam * rho * l * std::exp(-rho * l) / sigma;
    const double t = base * base / a0sq * b0sq * (b0sq + b1sq);
    s += t;
    if (l > 50.0 / rho && t < 1e-18 * s) break;
  }
  return s;
}

// Least-squares slope of log|e| against log rho.
double slope(const std::vector<double>& rho, const std::vector<double>& e) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    mx += std::log(rho[i]);
    my += std::log(std::fabs(e[i]));
  }
  mx /= rho.size();
  my /= rho.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double x = std::log(rho[i]) - mx;
    sxy += x * (std::log(std::fabs(e[i])) - my);
    sxx += x * x;
  }
  return sxy / sxx;
}

const std::vector<double> kRhos{0.04, 0.02, 0.01, 0.005};

}  // namespace

TEST(Beta, Values) {
  EXPECT_EQ(beta(2.0, 3, 3), 0.0);
  EXPECT_NEAR(beta(2.0, 3, 0), std::sqrt(3.0 * 7.0 / 5.0), 1e-14);
  EXPECT_NEAR(beta(1.5, 4, 1), std::sqrt(2.0 * 3.0 * 3.0 * 8.0 / (4.0 * 6.0)), 1e-14);
  EXPECT_THROW(beta(2.0, 2, 3), DomainError);
}

TEST(Coefficients, Support) {
  const auto g = g_coefficients({2.0, 0.3}, 40);
  const SphereDim d(5);
  EXPECT_EQ(g.find(MultiIndex::zonal(d, 0)), nullptr);
  EXPECT_EQ(g.find(g_tesseral_index(d, 1)), nullptr);
  EXPECT_NE(g.find(MultiIndex::zonal(d, 1)), nullptr);
  EXPECT_NE(g.find(g_tesseral_index(d, 2)), nullptr);
  EXPECT_EQ(g.size(), 79u);
  for (const auto& [i, c] : g.coefficients()) {
    EXPECT_EQ(c.imag(), 0.0);
    if (i.k[0] == 2) EXPECT_LT(c.real(), 0.0);
    else EXPECT_GT(c.real(), 0.0);
  }
}

TEST(Coefficients, DomainChecks) {
  EXPECT_THROW(g_coefficients({0.5, 0.1}, 10), DomainError);
  EXPECT_THROW(g_coefficients({1.7, 0.1}, 10), DomainError);
  EXPECT_THROW(g_coefficients({2.0, 0.0}, 10), DomainError);
  EXPECT_THROW(g_coefficients({2.0, -1.0}, 10), DomainError);
  EXPECT_THROW(norm_sq_asymptotic(1.0), DomainError);
  EXPECT_THROW(u_limit(1.0), DomainError);
}

TEST(SSum, ClosedFormsInRho) {
  for (int mu : {0, 3, 6}) {
    for (double rho : {2.0, 0.5, 0.05}) {
      const double q = std::exp(-2.0 * rho);
      EXPECT_LE(rel_err(s_sum_exact(mu, 0, rho), std::pow(1.0 - q, -mu - 1.0)), 1e-13);
      EXPECT_LE(rel_err(s_sum_exact(mu, 1, rho), (mu + 1.0) * q * std::pow(1.0 - q, -mu - 2.0)), 1e-13);
    }
  }
}

TEST(SSum, LargeRhoLimitAndMonotonicity) {
  EXPECT_NEAR(s_sum_exact(4, 0, 40.0), 1.0, 1e-15);
  EXPECT_LE(rel_err(s_sum_exact(4, 3, 40.0), 5.0 * std::exp(-80.0)), 1e-6);
  double prev = std::numeric_limits<double>::infinity();
  for (double rho = 0.01; rho < 5.0; rho *= 1.3) {
    const double v = s_sum_exact(5, 2, rho);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(SSum, AsymptoticLeadingTerm) {
  EXPECT_THROW(s_sum_asymptotic(2, 1), DomainError);
  for (int mu : {3, 4, 7}) {
    for (int m : {0, 2, 5}) {
      const auto a = s_sum_asymptotic(mu, m);
      const double lead = std::exp(std::lgamma(mu + m + 1.0) - std::lgamma(mu + 1.0)) * std::pow(2.0, -(mu + m + 1.0));
      EXPECT_LE(rel_err(a.coefficients[0], lead), 1e-13);
      EXPECT_LE(rel_err(a.eval(1e-3), s_sum_exact(mu, m, 1e-3)), 1e-9);
    }
  }
}

TEST(SSum, AsymptoticRemainderOrder) {
  for (int mu : {4, 6}) {
    for (int m : {0, 3, 6}) {
      const auto a = s_sum_asymptotic(mu, m);
      std::vector<double> e;
      for (double r : kRhos) e.push_back(s_sum_exact(mu, m, r) - a.eval(r));
      EXPECT_NEAR(slope(kRhos, e), a.error_order, 0.3) << mu << " " << m;
    }
  }
}

TEST(Norm, SeriesMatchesCoefficients) {
  for (double lam : {1.0, 1.5, 2.0, 3.5}) {
    for (double rho : {0.5, 0.1}) {
      const WaveletParams w{lam, rho};
      const double series = norm_sq_series(w);
      EXPECT_LE(rel_err(series, norm_sq_from_coefficients(lam, rho)), 1e-11) << lam << " " << rho;
      EXPECT_LE(rel_err(series, g_coefficients(w).norm_sq()), 1e-11);
    }
  }
}

TEST(Norm, AsymptoticLeadingCoefficient) {
  const double lam = 2.0;
  const double sigma = surface_constant(SphereDim(5));
  const auto a = norm_sq_asymptotic(lam);
  EXPECT_LE(rel_err(a.coefficients[0], 3.0 * 4.0 * 5.0 * 9.0 / 128.0 * 3.0 / (sigma * sigma)), 1e-13);
  EXPECT_EQ(a.leading_power, -9.0);
  EXPECT_LE(rel_err(a.eval(0.01), norm_sq_series({lam, 0.01})), 1e-6);
}

TEST(Norm, TruncationTailIsNegligible) {
  for (double rho : {0.5, 0.05}) {
    const WaveletParams w{2.0, rho};
    const auto L = g_truncation_degree(w);
    EXPECT_LT(g_tail_estimate(w, L), 1e-13);
    const auto a = uncertainty_G(w, L);
    const auto b = uncertainty_G(w, 2 * L);
    EXPECT_LE(rel_err(a.u, b.u), 1e-13);
  }
}

TEST(Coupling, ClosedFormStepsMatchIntegrator) {
  for (double lam : {1.0, 1.5, 2.0, 4.5}) {
    const SphereDim d = SphereDim::from_lambda(lam);
    const CouplingIntegrator integ(d);
    for (int l = 1; l <= 30; ++l) {
      EXPECT_LE(rel_err(coupling_zonal_step(lam, l),
                        integ(g_zonal_index(d, l), g_zonal_index(d, l + 1))[0].real()), 1e-13);
      if (l >= 2) {
        EXPECT_LE(rel_err(coupling_tesseral_step(lam, l),
                          integ(g_tesseral_index(d, l), g_tesseral_index(d, l + 1))[0].real()), 1e-13);
      }
    }
  }
}

TEST(Coupling, ClosedFormStepsMatchQuadrature) {
  const SphereDim d(3);
  const auto g = build_grid(d, 8);
  for (int l = 2; l <= 3; ++l) {
    const auto k = g_tesseral_index(d, l), m = g_tesseral_index(d, l + 1);
    const auto v = integrate(g, [&](const SpherePoint& p) {
      return std::conj(eval_harmonic(d, k, p)) * eval_harmonic(d, m, p) * p.cartesian()[0];
    });
    EXPECT_LE(rel_err(coupling_tesseral_step(1.0, l), v.real()), 1e-12);
  }
}

TEST(GravityCenterG, AllPathsAgree) {
  for (double lam : {1.0, 1.5, 2.0, 3.0}) {
    for (double rho : {0.5, 0.1}) {
      const WaveletParams w{lam, rho};
      const auto series = gravity_center_G(w);
      const auto generic = gravity_center(g_coefficients(w));
      EXPECT_LE(rel_err(series[0], generic[0]), 1e-12) << lam << " " << rho;
      EXPECT_LE(rel_err(series[0], gravity_center_G_pairs(w, g_truncation_degree(w))), 1e-12);
      for (std::size_t i = 1; i < series.size(); ++i) {
        EXPECT_EQ(series[i], 0.0);
        EXPECT_NEAR(generic[i], 0.0, 1e-15);
      }
      EXPECT_GT(series[0], 0.0);
      EXPECT_LT(series[0], 1.0);
    }
  }
}

TEST(MomentumG, SeriesMatchesEigenvalueSum) {
  for (double lam : {1.0, 2.0, 2.5}) {
    for (double rho : {0.5, 0.1}) {
      const WaveletParams w{lam, rho};
      EXPECT_LE(rel_err(var_m_G(w), momentum_variance(g_coefficients(w))), 1e-12);
      EXPECT_GT(var_m_G(w), 0.0);
    }
  }
}

TEST(Asymptotics, RemainderOrders) {
  for (double lam : {1.5, 2.0, 3.0}) {
    const auto an = norm_sq_asymptotic(lam);
    const auto ax = xi_G_asymptotic(lam);
    const auto as = var_s_G_asymptotic(lam);
    const auto am = var_m_G_asymptotic(lam);
    const auto au = u_G_asymptotic(lam);
    std::vector<double> en, ex, es, em, eu;
    for (double r : kRhos) {
      const WaveletParams w{lam, r};
      const auto rep = uncertainty_G_series(w);
      en.push_back(norm_sq_series(w) - an.eval(r));
      ex.push_back(rep.xi[0] - ax.eval(r));
      es.push_back(rep.var_s - as.eval(r));
      em.push_back(rep.var_m - am.eval(r));
      eu.push_back(rep.u - au.eval(r));
    }
    EXPECT_NEAR(slope(kRhos, en), an.error_order, 0.3) << lam;
    EXPECT_NEAR(slope(kRhos, ex), ax.error_order, 0.3) << lam;
    EXPECT_NEAR(slope(kRhos, es), as.error_order, 0.3) << lam;
    EXPECT_NEAR(slope(kRhos, em), am.error_order, 0.3) << lam;
    EXPECT_NEAR(slope(kRhos, eu), au.error_order, 0.3) << lam;
  }
}

TEST(Limits, LambdaTwo) {
  const auto lim = g_limits(2.0);
  EXPECT_NEAR(lim.var_s_over_rho2, 59.0 / 135.0, 1e-6);
  EXPECT_NEAR(lim.rho2_var_m, 33.0, 1e-5);
  EXPECT_NEAR(lim.u, u_limit(2.0), 1e-6);
  EXPECT_NEAR(u_limit(2.0), 3.797660098, 1e-9);
}

TEST(Limits, UncertaintyEnvelopeAtSmallRho) {
  const double lam = 2.0, rho = 0.01;
  const auto u = uncertainty_G_series({lam, rho}).u;
  const auto a = u_G_asymptotic(lam);
  EXPECT_LE(std::fabs(u - u_limit(lam)), std::fabs(a.coefficients[1]) * rho + 10.0 * rho * rho);
  EXPECT_LE(std::fabs(u - a.eval(rho)), 10.0 * rho * rho);
}

TEST(Limits, LargeLambdaGapDecays) {
  double prev_gap = 0.0;
  for (double lam : {10.0, 20.0, 40.0}) {
    const double gap = u_limit(lam) - (lam + 25.0 / 12.0);
    EXPECT_LT(gap, 0.0);
    if (prev_gap != 0.0) {
      const double ratio = prev_gap / gap;
      EXPECT_GT(ratio, 1.6);
      EXPECT_LT(ratio, 2.4);
    }
    prev_gap = gap;
  }
}

TEST(Bound, HoldsAcrossParameters) {
  for (double lam : {1.0, 1.5, 2.0, 5.0}) {
    for (double rho : {2.0, 0.5, 0.05, 0.01}) {
      const auto r = uncertainty_G_series({lam, rho});
      EXPECT_GE(r.u, r.bound) << lam << " " << rho;
      EXPECT_TRUE(r.bound_ok);
    }
  }
}

TEST(ZonalFamily, CoefficientsAndGenericPath) {
  const double lam = 2.0, rho = 0.2;
  const auto c = zonal_poisson_coefficients(lam, 2, rho);
  EXPECT_EQ(c[0], 0.0);
  EXPECT_DOUBLE_EQ(*std::max_element(c.begin(), c.end()), 1.0);
  const SphereDim d = SphereDim::from_lambda(lam);
  FourierExpansion f(d);
  for (std::size_t l = 1; l < c.size(); ++l) f.add(MultiIndex::zonal(d, static_cast<std::int64_t>(l)), c[l]);
  EXPECT_LE(rel_err(uncertainty_report(f).u, zonal_uncertainty(lam, 2, rho).u), 1e-12);
  EXPECT_THROW(zonal_poisson_coefficients(lam, 0, rho), DomainError);
}

TEST(ZonalFamily, MinimumExceedsBoundAndLiesBelowDirectional) {
  const auto grid = default_limit_grid();
  for (double lam : {2.0, 4.0}) {
    const auto zm = zonal_min_limit(lam, grid);
    EXPECT_GE(zm.value, lam + 0.5);
    EXPECT_GT(u_limit(lam) / zm.value, 1.0);
  }
}

TEST(RatioCurve, DecreasingAboveOne) {
  const std::vector<double> lambdas{2.0, 3.0, 5.0};
  const auto pts = ratio_curve(lambdas);
  ASSERT_EQ(pts.size(), 3u);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_EQ(pts[i].lambda, lambdas[i]);
    EXPECT_GT(pts[i].ratio, 1.0);
    if (i) EXPECT_LT(pts[i].ratio, pts[i - 1].ratio);
  }
  const std::vector<double> bad{1.5};
  EXPECT_THROW(ratio_curve(bad), DomainError);
}
