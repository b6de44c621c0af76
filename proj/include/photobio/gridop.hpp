#pragma once

#include <Eigen/Dense>
#include <vector>

namespace photobio {

/// Finite-difference weights for the m-th derivative at x0 from arbitrary
/// nodes (Fornberg's recursion).
std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int order);

/// Dense differentiation matrices on a uniform grid of n points over [0, 1].
/// Interior rows use symmetric stencils, wall-adjacent rows use clamped
/// one-sided stencils; every row is 4th-order accurate.
struct DiffMatrices {
  Eigen::MatrixXd d1, d2, d3, d4;
  int n = 0;
  double h = 0.0;

  static const DiffMatrices& get(int n);  // per-size cache
};

/// Matrix J with (J f)_i ~ int_{z_i}^{1} f dz on the uniform grid
/// (composite 4th-order rule built from local cubics).
Eigen::MatrixXd integrate_from_top_matrix(int n);

/// Natural cubic spline through (x_i, y_i), x strictly increasing.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);
  double operator()(double x) const;  // clamped to [x_front, x_back]
  double derivative(double x) const;

 private:
  std::vector<double> x_, y_, m_;  // m_: second derivatives
};

}  // namespace photobio
