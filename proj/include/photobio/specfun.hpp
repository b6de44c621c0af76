#pragma once

#include <vector>

namespace photobio {

/// Exponential integral E_n(x) = int_1^inf exp(-x t) / t^n dt.
///
/// Power series below the switchover, continued fraction above it.
/// Accurate to ~1e-14 relative for n >= 1 and x in [1e-12, 50];
/// underflows to 0 for very large x.  E_1(0) diverges and throws.
double expn(int n, double x);

/// Gauss-Legendre rule mapped to [lo, hi].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double lo = -1.0;
  double hi = 1.0;

  template <typename F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

/// order >= 2 points; exact for polynomials of degree <= 2*order - 1.
QuadratureRule gauss_rule(int order, double lo, double hi);

}  // namespace photobio
