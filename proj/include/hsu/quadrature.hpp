#pragma once

// Brute-force integration over S^n: tensor Gauss-Jacobi rules on each polar axis and the
// equispaced trapezoid rule in phi. Serves as the independent oracle for closed forms.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "hsu/errors.hpp"
#include "hsu/numeric.hpp"
#include "hsu/sphere_core.hpp"

namespace hsu {

inline constexpr std::int64_t kDefaultMaxNodes = 10'000'000;

/// Quadrature cap: UNCERT_MAX_NODES if set and positive, otherwise the built-in default.
inline std::int64_t max_nodes_from_env() {
  if (const char* s = std::getenv("UNCERT_MAX_NODES")) {
    char* end = nullptr;
    const long long v = std::strtoll(s, &end, 10);
    if (end != s && *end == '\0' && v > 0) return v;
  }
  return kDefaultMaxNodes;
}

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Jacobi rule for int_{-1}^{1} f(t) (1-t)^alpha (1+t)^beta dt, alpha, beta > -1,
/// from the eigen decomposition of the symmetric Jacobi matrix (Golub-Welsch).
inline GaussRule gauss_jacobi(int npts, double alpha, double beta) {
  if (npts < 1) throw DomainError("gauss_jacobi: need at least one node");
  if (!(alpha > -1.0 && beta > -1.0)) throw DomainError("gauss_jacobi: alpha, beta must exceed -1");
  const double ab = alpha + beta;
  Eigen::VectorXd diag(npts);
  Eigen::VectorXd off(std::max(npts - 1, 0));
  for (int k = 0; k < npts; ++k) {
    const double s = 2.0 * k + ab;
    if (k == 0) {
      diag(k) = (beta - alpha) / (ab + 2.0);
    } else {
      diag(k) = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
  }
  for (int k = 1; k < npts; ++k) {
    const double s = 2.0 * k + ab;
    // (k + ab) / (s - 1) == 1 at k = 1; written out to avoid 0/0 when alpha + beta = -1
    const double b2 = k == 1 ? 4.0 * (1.0 + alpha) * (1.0 + beta) / (s * s * (s + 1.0))
                             : 4.0 * k * (k + alpha) * (k + beta) * (k + ab) /
                                   (s * s * (s + 1.0) * (s - 1.0));
    off(k - 1) = std::sqrt(b2);
  }
  const double log_mu0 = (ab + 1.0) * std::numbers::ln2 + log_gamma(alpha + 1.0) +
                         log_gamma(beta + 1.0) - log_gamma(ab + 2.0);
  const double mu0 = std::exp(log_mu0);

  GaussRule rule;
  rule.nodes.resize(npts);
  rule.weights.resize(npts);
  if (npts == 1) {
    rule.nodes[0] = diag(0);
    rule.weights[0] = mu0;
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw ConvergenceError("gauss_jacobi: eigensolver failed");
  for (int j = 0; j < npts; ++j) {
    rule.nodes[j] = es.eigenvalues()(j);
    const double v0 = es.eigenvectors()(0, j);
    rule.weights[j] = mu0 * v0 * v0;
  }
  return rule;
}

/// One polar axis of a grid: angles with their cosines/sines and weights that include
/// the sin^{n-iota} Jacobian.
struct PolarAxis {
  std::vector<double> theta;
  std::vector<double> cos_t;
  std::vector<double> sin_t;
  std::vector<double> weights;
};

/// Tensor-product rule realizing the normalized measure on S^n, exact for
/// Y_l^k conj(Y_l'^k') x for l + l' <= exactness.
class QuadratureGrid {
 public:
  QuadratureGrid(const SphereDim& d, int exactness, std::int64_t max_nodes)
      : dim_(d), exactness_(exactness) {
    if (exactness < 1) throw DomainError("quadrature exactness degree must be >= 1");
    const int n = d.n();
    const int polar_pts = (exactness + 2 + 1) / 2 + 1;
    const int phi_pts = exactness + 2;
    double total = static_cast<double>(phi_pts);
    for (int i = 0; i < n - 1; ++i) total *= polar_pts;
    if (total > static_cast<double>(max_nodes)) {
      throw ResourceError("quadrature grid needs " + std::to_string(static_cast<long long>(total)) +
                          " nodes, cap is " + std::to_string(max_nodes));
    }
    const double inv_sigma = std::exp(-log_surface_constant(d));
    for (int iota = 1; iota <= n - 1; ++iota) {
      const double a = 0.5 * (n - iota - 1);
      GaussRule r = gauss_jacobi(polar_pts, a, a);
      PolarAxis ax;
      for (int j = 0; j < polar_pts; ++j) {
        const double t = r.nodes[j];
        ax.theta.push_back(std::acos(t));
        ax.cos_t.push_back(t);
        ax.sin_t.push_back(std::sqrt((1.0 - t) * (1.0 + t)));
        ax.weights.push_back(r.weights[j]);
      }
      axes_.push_back(std::move(ax));
    }
    for (int j = 0; j < phi_pts; ++j) {
      phi_.push_back(2.0 * std::numbers::pi * j / phi_pts);
      phi_w_.push_back(2.0 * std::numbers::pi / phi_pts * inv_sigma);
    }
  }

  const SphereDim& dim() const { return dim_; }
  int exactness() const { return exactness_; }
  const std::vector<PolarAxis>& polar_axes() const { return axes_; }
  const std::vector<double>& phi_nodes() const { return phi_; }
  const std::vector<double>& phi_weights() const { return phi_w_; }

  std::int64_t size() const {
    std::int64_t s = static_cast<std::int64_t>(phi_.size());
    for (const auto& ax : axes_) s *= static_cast<std::int64_t>(ax.theta.size());
    return s;
  }

  /// Calls visit(point, weight) for every node.
  template <typename Visit>
  void for_each_node(Visit&& visit) const {
    const std::size_t m = axes_.size();
    std::vector<std::size_t> pos(m, 0);
    std::vector<double> th(m), c(m), s(m);
    while (true) {
      double w = 1.0;
      for (std::size_t i = 0; i < m; ++i) {
        th[i] = axes_[i].theta[pos[i]];
        c[i] = axes_[i].cos_t[pos[i]];
        s[i] = axes_[i].sin_t[pos[i]];
        w *= axes_[i].weights[pos[i]];
      }
      for (std::size_t j = 0; j < phi_.size(); ++j) {
        visit(SpherePoint(th, c, s, phi_[j]), w * phi_w_[j]);
      }
      std::size_t i = 0;
      for (; i < m; ++i) {
        if (++pos[i] < axes_[i].theta.size()) break;
        pos[i] = 0;
      }
      if (i == m) break;
    }
  }

 private:
  SphereDim dim_;
  int exactness_;
  std::vector<PolarAxis> axes_;
  std::vector<double> phi_;
  std::vector<double> phi_w_;
};

inline QuadratureGrid build_grid(const SphereDim& d, int exactness,
                                 std::int64_t max_nodes = max_nodes_from_env()) {
  return QuadratureGrid(d, exactness, max_nodes);
}

using PointFunction = std::function<std::complex<double>(const SpherePoint&)>;

/// Weighted node sum approximating int_{S^n} f d(sigma).
inline std::complex<double> integrate(const QuadratureGrid& g, const PointFunction& f) {
  CompensatedSum<double> re, im;
  bool finite = true;
  g.for_each_node([&](const SpherePoint& p, double w) {
    const std::complex<double> v = f(p);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) finite = false;
    re += w * v.real();
    im += w * v.imag();
  });
  if (!finite) throw DomainError("integrand is not finite on the quadrature grid");
  return {re.value(), im.value()};
}

/// Direct quadrature of xi_O(F) = int x |F|^2 / ||F||^2.
inline std::vector<double> gravity_center_direct(const QuadratureGrid& g, const PointFunction& f) {
  const int dim = g.dim().ambient();
  std::vector<CompensatedSum<double>> acc(static_cast<std::size_t>(dim));
  CompensatedSum<double> norm;
  bool finite = true;
  g.for_each_node([&](const SpherePoint& p, double w) {
    const double a = std::norm(f(p));
    if (!std::isfinite(a)) finite = false;
    norm += w * a;
    const auto& x = p.cartesian();
    for (int i = 0; i < dim; ++i) acc[i] += w * a * x[i];
  });
  if (!finite) throw DomainError("integrand is not finite on the quadrature grid");
  const double nn = norm.value();
  if (!(nn > 0.0)) throw ZeroNormError();
  std::vector<double> xi(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) xi[i] = acc[i].value() / nn;
  return xi;
}

/// Direct quadrature of var_M(F) = -int (Laplace F) conj(F) / ||F||^2, with the
/// Laplace-Beltrami image supplied by the caller.
inline double momentum_direct(const QuadratureGrid& g, const PointFunction& f,
                              const PointFunction& laplace_f) {
  CompensatedSum<double> norm, num;
  bool finite = true;
  g.for_each_node([&](const SpherePoint& p, double w) {
    const std::complex<double> v = f(p);
    const std::complex<double> lv = laplace_f(p);
    if (!std::isfinite(std::norm(v)) || !std::isfinite(std::norm(lv))) finite = false;
    norm += w * std::norm(v);
    num += -w * (lv * std::conj(v)).real();
  });
  if (!finite) throw DomainError("integrand is not finite on the quadrature grid");
  const double nn = norm.value();
  if (!(nn > 0.0)) throw ZeroNormError();
  return num.value() / nn;
}

}  // namespace hsu
