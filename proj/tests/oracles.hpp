// Independent numerical oracles used by the test suites.  Everything here is
// deliberately naive: adaptive quadrature, finite differences, bisection.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracles {

// adaptive Simpson on [a, b]
inline double simpson_panel(const std::function<double(double)>& f, double a, double b,
                            double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson_panel(f, a, m, fa, flm, fm);
  const double right = simpson_panel(f, m, b, fm, frm, fb);
  if (depth <= 0) return left + right;
  if (std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = simpson_panel(f, a, b, fa, fm, fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

// E_n(x) through the finite substitution t = 1/v
inline double expn_quadrature(int n, double x) {
  if (x <= 0.0) throw std::domain_error("expn_quadrature: x must be positive");
  return integrate([&](double v) { return v <= 0.0 ? 0.0
                                                   : std::exp(-x / v) * std::pow(v, n - 2); },
                   0.0, 1.0, 1e-14);
}

inline double central_diff(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-10) {
  double flo = f(lo);
  if (!(flo * f(hi) < 0.0)) throw std::runtime_error("bisect: no sign change");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) * flo > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracles
