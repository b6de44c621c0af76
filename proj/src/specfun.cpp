#include "photobio/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace photobio {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209;

// Series for E_1, x <= 1:  E_1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!)
double e1_series(double x) {
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= -x / k;
    const double add = -term / k;
    sum += add;
    if (std::abs(add) < 1e-18 * (std::abs(sum) + 1e-30)) break;
  }
  return -kEulerGamma - std::log(x) + sum;
}

// Modified Lentz continued fraction for E_n(x), x > 1.
// E_n(x) = exp(-x) * 1/(x+n- 1*n/(x+n+2- 2(n+1)/(x+n+4- ...)))
double en_contfrac(int n, double x) {
  const double tiny = 1e-300;
  double b = x + n;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 200; ++i) {
    const double a = -static_cast<double>(i) * (n - 1 + i);
    b += 2.0;
    d = a * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x) * h;
}

}  // namespace

double expn(int n, double x) {
  if (n < 1) throw std::domain_error("expn: order must be >= 1");
  if (x < 0.0) throw std::domain_error("expn: negative argument");
  if (x == 0.0) {
    if (n == 1) throw std::domain_error("expn: E_1 diverges at x = 0");
    return 1.0 / (n - 1);
  }
  if (x > 700.0) return 0.0;
  if (x > 1.0) return en_contfrac(n, x);

  // Small x: series for E_1, then stable upward recurrence
  // E_{m+1}(x) = (exp(-x) - x E_m(x)) / m.
  double e = e1_series(x);
  const double ex = std::exp(-x);
  for (int m = 1; m < n; ++m) e = (ex - x * e) / m;
  return e;
}

QuadratureRule gauss_rule(int order, double lo, double hi) {
  if (order < 2) throw std::invalid_argument("gauss_rule: order must be >= 2");
  if (!(lo < hi)) throw std::invalid_argument("gauss_rule: need lo < hi");

  QuadratureRule rule;
  rule.lo = lo;
  rule.hi = hi;
  rule.nodes.resize(order);
  rule.weights.resize(order);

  // Newton iteration on P_n roots, symmetric pairs on [-1, 1].
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= order; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    rule.nodes[i] = mid - half * x;
    rule.nodes[order - 1 - i] = mid + half * x;
    rule.weights[i] = half * w;
    rule.weights[order - 1 - i] = half * w;
  }
  return rule;
}

}  // namespace photobio
