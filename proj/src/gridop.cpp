#include "photobio/gridop.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace photobio {

std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int order) {
  const int n = static_cast<int>(nodes.size());
  if (order >= n) throw std::invalid_argument("fd_weights: need more nodes than order");
  // B. Fornberg, Math. Comp. 51 (1988) 699-706.
  std::vector<std::vector<double>> c(n, std::vector<double>(order + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][order];
  return w;
}

namespace {

Eigen::MatrixXd diff_matrix(int n, double h, int order) {
  // symmetric interior width: 5 for d1/d2, 7 for d3/d4;
  // clamped width order+4 near walls keeps 4th-order accuracy.
  const int sym = (order <= 2) ? 5 : 7;
  const int edge = order + 4;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int half = sym / 2;
    int lo, width;
    if (i - half >= 0 && i + half < n) {
      lo = i - half;
      width = sym;
    } else {
      width = edge;
      lo = std::min(std::max(i - width / 2, 0), n - width);
    }
    std::vector<double> nodes(width);
    for (int j = 0; j < width; ++j) nodes[j] = (lo + j) * h;
    const auto w = fd_weights(i * h, nodes, order);
    for (int j = 0; j < width; ++j) m(i, lo + j) = w[j];
  }
  return m;
}

std::map<int, DiffMatrices> g_diff_cache;
std::mutex g_diff_mutex;

}  // namespace

const DiffMatrices& DiffMatrices::get(int n) {
  if (n < 9) throw std::invalid_argument("DiffMatrices: grid too small");
  std::lock_guard<std::mutex> lock(g_diff_mutex);
  auto it = g_diff_cache.find(n);
  if (it != g_diff_cache.end()) return it->second;
  DiffMatrices dm;
  dm.n = n;
  dm.h = 1.0 / (n - 1);
  dm.d1 = diff_matrix(n, dm.h, 1);
  dm.d2 = diff_matrix(n, dm.h, 2);
  dm.d3 = diff_matrix(n, dm.h, 3);
  dm.d4 = diff_matrix(n, dm.h, 4);
  return g_diff_cache.emplace(n, std::move(dm)).first->second;
}

Eigen::MatrixXd integrate_from_top_matrix(int n) {
  if (n < 5) throw std::invalid_argument("integrate_from_top_matrix: grid too small");
  const double h = 1.0 / (n - 1);
  // Per-interval weights of int_{z_j}^{z_{j+1}} f dz against the cubic
  // through 4 neighbouring nodes, accumulated from the top down.
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(n);  // int_{z_i}^{1}
  for (int j = n - 2; j >= 0; --j) {
    const int base = std::min(std::max(j - 1, 0), n - 4);
    std::vector<double> nodes(4);
    for (int q = 0; q < 4; ++q) nodes[q] = (base + q) * h;
    // integrate the Lagrange basis over [z_j, z_{j+1}] exactly (Gauss-3)
    const double a = j * h, b = (j + 1) * h;
    const double gx[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    for (int q = 0; q < 4; ++q) {
      double s = 0.0;
      for (int g = 0; g < 3; ++g) {
        const double x = 0.5 * (a + b) + 0.5 * (b - a) * gx[g];
        double l = 1.0;
        for (int r = 0; r < 4; ++r)
          if (r != q) l *= (x - nodes[r]) / (nodes[q] - nodes[r]);
        s += 0.5 * (b - a) * gw[g] * l;
      }
      acc(base + q) += s;
    }
    m.row(j) = acc;
  }
  return m;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const int n = static_cast<int>(x_.size());
  if (n < 4 || y_.size() != x_.size())
    throw std::invalid_argument("CubicSpline: need >= 4 matching points");
  // second derivatives with not-a-knot ends (single cubic across the first
  // and last interior knots), solved as a general banded system
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int i = 1; i < n - 1; ++i) {
    const double hl = x_[i] - x_[i - 1], hr = x_[i + 1] - x_[i];
    A(i, i - 1) = hl / 6.0;
    A(i, i) = (hl + hr) / 3.0;
    A(i, i + 1) = hr / 6.0;
    rhs(i) = (y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl;
  }
  {
    const double h0 = x_[1] - x_[0], h1 = x_[2] - x_[1];
    A(0, 0) = h1;
    A(0, 1) = -(h0 + h1);
    A(0, 2) = h0;
    const double hm = x_[n - 1] - x_[n - 2], hp = x_[n - 2] - x_[n - 3];
    A(n - 1, n - 3) = hm;
    A(n - 1, n - 2) = -(hm + hp);
    A(n - 1, n - 1) = hp;
  }
  const Eigen::VectorXd m = A.partialPivLu().solve(rhs);
  m_.assign(m.data(), m.data() + n);
}

double CubicSpline::operator()(double x) const {
  const int n = static_cast<int>(x_.size());
  if (x <= x_.front()) x = x_.front();
  if (x >= x_.back()) x = x_.back();
  int lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (x_[mid] > x ? hi : lo) = mid;
  }
  const double dx = x_[hi] - x_[lo];
  const double a = (x_[hi] - x) / dx, b = (x - x_[lo]) / dx;
  return a * y_[lo] + b * y_[hi] +
         ((a * a * a - a) * m_[lo] + (b * b * b - b) * m_[hi]) * dx * dx / 6.0;
}

double CubicSpline::derivative(double x) const {
  const int n = static_cast<int>(x_.size());
  if (x <= x_.front()) x = x_.front();
  if (x >= x_.back()) x = x_.back();
  int lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (x_[mid] > x ? hi : lo) = mid;
  }
  const double dx = x_[hi] - x_[lo];
  const double a = (x_[hi] - x) / dx, b = (x - x_[lo]) / dx;
  return (y_[hi] - y_[lo]) / dx +
         ((3.0 * b * b - 1.0) * m_[hi] - (3.0 * a * a - 1.0) * m_[lo]) * dx / 6.0;
}

}  // namespace photobio
