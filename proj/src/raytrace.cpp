#include "photobio/raytrace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace photobio {

namespace {

// 4-point Gauss-Legendre on [0, 1]
constexpr double kGx[4] = {0.06943184420297371, 0.33000947820757187,
                           0.66999052179242813, 0.93056815579702629};
constexpr double kGw[4] = {0.17392742256872692, 0.32607257743127308,
                           0.32607257743127308, 0.17392742256872692};

struct Cubic {
  // value and antiderivative (from s = 0) of a cubic in s
  double c[4];
  double eval(double s) const { return ((c[3] * s + c[2]) * s + c[1]) * s + c[0]; }
  double integral(double s) const {
    return (((c[3] / 4.0 * s + c[2] / 3.0) * s + c[1] / 2.0) * s + c[0]) * s;
  }
};

// cubic through (x[m], y[m]) expressed in s = x - x0
Cubic fit_cubic(const double* x, const double* y, double x0) {
  Cubic q{{0.0, 0.0, 0.0, 0.0}};
  for (int m = 0; m < 4; ++m) {
    // Lagrange basis L_m expanded in monomials of s
    double poly[4] = {1.0, 0.0, 0.0, 0.0};
    int deg = 0;
    double denom = 1.0;
    for (int r = 0; r < 4; ++r) {
      if (r == m) continue;
      denom *= x[m] - x[r];
      const double root = x[r] - x0;
      for (int d = deg; d >= 0; --d) {
        poly[d + 1] += poly[d];
        poly[d] *= -root;
      }
      ++deg;
    }
    const double f = y[m] / denom;
    for (int d = 0; d < 4; ++d) q.c[d] += f * poly[d];
  }
  return q;
}

}  // namespace

std::vector<RaySegment> build_ray_segments(std::span<const double> t,
                                           std::span<const double> profile,
                                           double prof_scale,
                                           std::complex<double> a_const) {
  const int n = static_cast<int>(t.size());
  if (n < 4 || profile.size() != t.size())
    throw std::invalid_argument("build_ray_segments: need >= 4 matching nodes");
  std::vector<RaySegment> segs(n - 1);

  for (int j = 0; j < n - 1; ++j) {
    const int base = std::clamp(j - 1, 0, n - 4);
    double xs[4], ps[4];
    for (int m = 0; m < 4; ++m) {
      xs[m] = t[base + m];
      ps[m] = profile[base + m];
    }
    const double t0 = t[j];
    const double h = t[j + 1] - t0;
    const Cubic pc = fit_cubic(xs, ps, t0);

    // attenuation integral A(s) = a_const*s + prof_scale*int_0^s p
    auto attn = [&](double s) {
      return a_const * s + std::complex<double>(prof_scale * pc.integral(s), 0.0);
    };
    const std::complex<double> A_h = attn(h);

    RaySegment& seg = segs[j];
    seg.base = base;
    seg.atten = std::exp(-A_h);
    for (int m = 0; m < 4; ++m) seg.w[m] = 0.0;

    const int nsub = std::max(1, static_cast<int>(std::ceil(std::abs(A_h) / 0.8)));
    const double ds = h / nsub;
    for (int sub = 0; sub < nsub; ++sub) {
      const double s0 = sub * ds;
      for (int q = 0; q < 4; ++q) {
        const double s = s0 + kGx[q] * ds;
        const std::complex<double> wgt = kGw[q] * ds * std::exp(attn(s) - A_h);
        // Lagrange basis of the source stencil at s
        const double x = t0 + s;
        for (int m = 0; m < 4; ++m) {
          double l = 1.0;
          for (int r = 0; r < 4; ++r)
            if (r != m) l *= (x - xs[r]) / (xs[m] - xs[r]);
          seg.w[m] += wgt * l;
        }
      }
    }
  }
  return segs;
}

std::vector<std::complex<double>> sweep_ray(const std::vector<RaySegment>& segs,
                                            std::complex<double> entry,
                                            std::span<const std::complex<double>> rhs) {
  const int n = static_cast<int>(segs.size()) + 1;
  std::vector<std::complex<double>> psi(n);
  psi[0] = entry;
  for (int j = 0; j < n - 1; ++j) {
    const RaySegment& s = segs[j];
    std::complex<double> src = 0.0;
    for (int m = 0; m < 4; ++m) src += s.w[m] * rhs[s.base + m];
    psi[j + 1] = s.atten * psi[j] + src;
  }
  return psi;
}

std::vector<double> sweep_ray_real(const std::vector<RaySegment>& segs, double entry,
                                   std::span<const double> rhs) {
  const int n = static_cast<int>(segs.size()) + 1;
  std::vector<double> psi(n);
  psi[0] = entry;
  for (int j = 0; j < n - 1; ++j) {
    const RaySegment& s = segs[j];
    double src = 0.0;
    for (int m = 0; m < 4; ++m) src += s.w[m].real() * rhs[s.base + m];
    psi[j + 1] = s.atten.real() * psi[j] + src;
  }
  return psi;
}

void accumulate_ray_response(const std::vector<RaySegment>& segs, std::complex<double> c,
                             bool reversed, Eigen::MatrixXcd& T,
                             std::span<const double> col_scale) {
  const int n = static_cast<int>(segs.size()) + 1;
  // row holds the response of the current psi to every source node;
  // after interval j it is nonzero only up to node j + 2.
  Eigen::VectorXcd row = Eigen::VectorXcd::Zero(n);
  for (int j = 0; j < n - 1; ++j) {
    const RaySegment& s = segs[j];
    const int maxidx = std::min(std::max(j + 2, s.base + 3), n - 1);
    row.head(maxidx + 1) *= s.atten;
    for (int m = 0; m < 4; ++m) row(s.base + m) += s.w[m];
    const int gi = reversed ? n - 2 - j : j + 1;
    for (int m = 0; m <= maxidx; ++m) {
      const int gm = reversed ? n - 1 - m : m;
      const double scale = col_scale.empty() ? 1.0 : col_scale[gm];
      T(gi, gm) += c * scale * row(m);
    }
  }
}

}  // namespace photobio
