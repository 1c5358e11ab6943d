#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "hsu/errors.hpp"

namespace hsu {

/// sum_j c_j rho^{p0 + j} + O(rho^{error_order}).
struct AsymptoticPolynomial {
  double leading_power = 0.0;
  std::vector<double> coefficients;
  double error_order = 0.0;

  double power(std::size_t j) const { return leading_power + static_cast<double>(j); }

  double eval(double rho) const {
    if (!(rho > 0.0)) throw DomainError("asymptotic expansion needs rho > 0");
    double s = 0.0;
    // smallest terms first
    for (std::size_t j = coefficients.size(); j-- > 0;) {
      s += coefficients[j] * std::pow(rho, power(j));
    }
    return s;
  }

  /// The first `terms` retained terms only.
  double eval_partial(double rho, std::size_t terms) const {
    AsymptoticPolynomial p = *this;
    if (terms < p.coefficients.size()) p.coefficients.resize(terms);
    return p.eval(rho);
  }
};

}  // namespace hsu
