#include "photobio/radiative.hpp"

#include <cmath>
#include <stdexcept>

#include "photobio/raytrace.hpp"

namespace photobio {

namespace {

constexpr double kEuler = 0.57721566490153286060651209;

// F_m^{(n)}(x) = int_0^x u^m E_n(u) du via  int u^m E_n = -x^m E_{n+1} + m int u^{m-1} E_{n+1}
// (stable only away from 0: the recursion carries an absolute ~1e-16 floor)
double en_moment(int m, int n, double x) {
  if (x <= 0.0) return 0.0;
  if (m == 0) return 1.0 / n - expn(n + 1, x);
  return -std::pow(x, m) * expn(n + 1, x) + m * en_moment(m - 1, n + 1, x);
}

// int u^j ln u du over [u1, u2]
double log_moment(int j, double u1, double u2) {
  auto anti = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double p = std::pow(u, j + 1);
    return p * (std::log(u) / (j + 1) - 1.0 / ((j + 1) * (j + 1)));
  };
  return anti(u2) - anti(u1);
}

// stable int_{u1}^{u2} u^q E_n(u) du for n in {1, 2}, small arguments via the
// explicit log split E_1 = -ln u + P1, E_2 = u ln u + P2
double en_integral(int q, int n, double u1, double u2) {
  if (u2 <= u1) return 0.0;
  constexpr double cut = 0.8;
  if (u1 >= cut) return en_moment(q, n, u2) - en_moment(q, n, u1);
  if (u2 > cut) return en_integral(q, n, u1, cut) + en_integral(q, n, cut, u2);

  constexpr int K = 26;
  static const auto coeffs = [] {
    struct Tab {
      double p1[K + 1];
      double p2[K + 2];
    } t{};
    // P1 = -gamma + sum_{k>=1} (-1)^{k+1} u^k / (k k!)
    t.p1[0] = -kEuler;
    double fact = 1.0;
    for (int k = 1; k <= K; ++k) {
      fact *= k;
      t.p1[k] = ((k % 2) ? 1.0 : -1.0) / (k * fact);
    }
    // P2 = e^{-u} - u P1
    double efact = 1.0;
    for (int k = 0; k <= K; ++k) {
      if (k > 0) efact *= -static_cast<double>(k);
      t.p2[k] = 1.0 / efact;
      if (k >= 1) t.p2[k] -= t.p1[k - 1];
    }
    t.p2[K + 1] = -t.p1[K];
    return t;
  }();

  auto poly_moment = [&](const double* c, int len) {
    double s = 0.0;
    for (int k = 0; k < len; ++k) {
      const int j = q + k + 1;
      s += c[k] * (std::pow(u2, j) - std::pow(u1, j)) / j;
    }
    return s;
  };
  if (n == 1) return -log_moment(q, u1, u2) + poly_moment(coeffs.p1, K + 1);
  if (n == 2) return log_moment(q + 1, u1, u2) + poly_moment(coeffs.p2, K + 2);
  return en_moment(q, n, u2) - en_moment(q, n, u1);
}

// int_a^b (t - ref)^m E_n(|tau - t|) dt for an interval that does not straddle tau
double interval_moment(int m, int n, double a, double b, double ref, double tau) {
  double binom[4] = {1.0, 0.0, 0.0, 0.0};
  double result = 0.0;
  if (a >= tau) {
    // u = t - tau in [a-tau, b-tau], t - ref = u + (tau - ref)
    const double d = tau - ref;
    double coeff = 1.0;
    for (int q = m; q >= 0; --q) {
      binom[q] = coeff * std::pow(d, m - q);
      coeff = coeff * q / (m - q + 1.0);
    }
    for (int q = 0; q <= m; ++q)
      result += binom[q] * en_integral(q, n, a - tau, b - tau);
  } else {
    // u = tau - t in [tau-b, tau-a], t - ref = (tau - ref) - u
    const double d = tau - ref;
    double coeff = 1.0;
    for (int q = m; q >= 0; --q) {
      binom[q] = coeff * std::pow(d, m - q) * ((q % 2) ? -1.0 : 1.0);
      coeff = coeff * q / (m - q + 1.0);
    }
    for (int q = 0; q <= m; ++q)
      result += binom[q] * en_integral(q, n, tau - b, tau - a);
  }
  return result;
}

}  // namespace

Eigen::MatrixXd kernel_weights(std::span<const double> pts, double kappa, int order) {
  const int n = static_cast<int>(pts.size());
  if (n < 4) throw std::invalid_argument("kernel_weights: need >= 4 points");
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);

  // 6-point Gauss for intervals away from the kernel singularity
  constexpr double gx[6] = {0.033765242898423986, 0.169395306766867743,
                            0.380690406958401546, 0.619309593041598454,
                            0.830604693233132257, 0.966234757101576014};
  constexpr double gw[6] = {0.085662246189585172, 0.180380786524069304,
                            0.233956967286345524, 0.233956967286345524,
                            0.180380786524069304, 0.085662246189585172};

  for (int i = 0; i < n; ++i) {
    const double tau = pts[i];
    for (int j = 0; j < n - 1; ++j) {
      const int base = std::clamp(j - 1, 0, n - 4);
      const double xs[4] = {pts[base], pts[base + 1], pts[base + 2], pts[base + 3]};
      const double a0 = pts[j], b0 = pts[j + 1];
      const double width = b0 - a0;
      if (width <= 0.0) continue;
      const double dist = (tau < a0) ? a0 - tau : (tau > b0 ? tau - b0 : 0.0);

      if (dist > 4.0 * width) {
        // smooth kernel here; exact moments would difference large
        // exponential-integral values and lose precision
        for (int g = 0; g < 6; ++g) {
          const double t = a0 + gx[g] * width;
          const double wgt = gw[g] * width * expn(order, std::abs(tau - t));
          for (int q = 0; q < 4; ++q) {
            double l = 1.0;
            for (int r = 0; r < 4; ++r)
              if (r != q) l *= (t - xs[r]) / (xs[q] - xs[r]);
            W(i, base + q) += wgt * l;
          }
        }
        continue;
      }

      // near or through the singularity: exact kernel moments against the
      // local cubic, split at tau so each part is one-sided
      double splits[3] = {a0, b0, b0};
      int nparts = 1;
      if (tau > a0 && tau < b0) {
        splits[1] = tau;
        splits[2] = b0;
        nparts = 2;
      }
      for (int part = 0; part < nparts; ++part) {
        const double a = splits[part], b = splits[part + 1];
        if (b <= a) continue;
        double mom[4];
        for (int m = 0; m < 4; ++m) mom[m] = interval_moment(m, order, a, b, xs[0], tau);
        // Lagrange basis on the stencil expanded in powers of (t - xs[0])
        for (int q = 0; q < 4; ++q) {
          double poly[4] = {1.0, 0.0, 0.0, 0.0};
          int deg = 0;
          double denom = 1.0;
          for (int r = 0; r < 4; ++r) {
            if (r == q) continue;
            denom *= xs[q] - xs[r];
            const double root = xs[r] - xs[0];
            for (int d = deg; d >= 0; --d) {
              poly[d + 1] += poly[d];
              poly[d] *= -root;
            }
            ++deg;
          }
          double s = 0.0;
          for (int d = 0; d < 4; ++d) s += poly[d] * mom[d];
          W(i, base + q) += s / denom;
        }
      }
    }
  }
  (void)kappa;
  return W;
}

double RadiationField::collimated(double tau) const {
  return I_t * std::exp(-tau / cos_theta0);
}

RadiationField solve_lambda(const SuspensionParams& params, double theta0, int n_tau) {
  params.validate();
  if (n_tau < 33) throw std::invalid_argument("solve_lambda: n_tau must be >= 33");
  if (!(params.collimated_mag > 0.0))
    throw std::invalid_argument("solve_lambda: collimated magnitude must be positive");

  RadiationField f;
  f.kappa = params.extinction;
  f.cos_theta0 = std::cos(theta0);
  f.albedo = params.albedo;
  f.I_t = params.collimated_mag;
  f.I_D = params.diffuse_mag;

  // grid graded toward both faces
  f.tau_grid.resize(n_tau);
  for (int i = 0; i < n_tau; ++i) {
    const double s = static_cast<double>(i) / (n_tau - 1);
    f.tau_grid[i] = f.kappa * (s - std::sin(2.0 * M_PI * s) / (2.0 * M_PI));
  }
  f.tau_grid.front() = 0.0;
  f.tau_grid.back() = f.kappa;

  Eigen::VectorXd rhs(n_tau);
  const double id_scaled = f.I_D / f.I_t;
  for (int i = 0; i < n_tau; ++i) {
    const double tau = f.tau_grid[i];
    rhs(i) = std::exp(-tau / f.cos_theta0) + 2.0 * id_scaled * expn(2, tau);
  }

  f.lambda.assign(n_tau, 0.0);
  if (f.albedo == 0.0) {
    for (int i = 0; i < n_tau; ++i) f.lambda[i] = rhs(i);
  } else {
    Eigen::MatrixXd K = kernel_weights(f.tau_grid, f.kappa, 1);
    // pin the exact kernel mass on the diagonal (singularity subtraction)
    for (int i = 0; i < n_tau; ++i) {
      const double tau = f.tau_grid[i];
      const double mass = 2.0 - expn(2, tau) - expn(2, f.kappa - tau);
      K(i, i) += mass - K.row(i).sum();
    }
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n_tau, n_tau) - 0.5 * f.albedo * K;
    Eigen::VectorXd sol = A.partialPivLu().solve(rhs);
    const double resid = (A * sol - rhs).lpNorm<Eigen::Infinity>();
    if (!(resid <= 1e-9))
      throw std::runtime_error("solve_lambda: linear solve residual " + std::to_string(resid));
    for (int i = 0; i < n_tau; ++i) f.lambda[i] = sol(i);
  }

  f.lambda_spline = CubicSpline(f.tau_grid, f.lambda);
  return f;
}

double lambda_fixed_point_residual(const RadiationField& f) {
  const int n = static_cast<int>(f.tau_grid.size());
  Eigen::MatrixXd K = kernel_weights(f.tau_grid, f.kappa, 1);
  for (int i = 0; i < n; ++i) {
    const double tau = f.tau_grid[i];
    const double mass = 2.0 - expn(2, tau) - expn(2, f.kappa - tau);
    K(i, i) += mass - K.row(i).sum();
  }
  const double id_scaled = f.I_D / f.I_t;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double sweep = std::exp(-f.tau_grid[i] / f.cos_theta0) + 2.0 * id_scaled * expn(2, f.tau_grid[i]);
    for (int j = 0; j < n; ++j) sweep += 0.5 * f.albedo * K(i, j) * f.lambda[j];
    worst = std::max(worst, std::abs(sweep - f.lambda[i]));
  }
  return worst;
}

QuadratureRule hemisphere_rule(int n) {
  const QuadratureRule base = gauss_rule(n, 0.0, 1.0);
  QuadratureRule r;
  r.lo = 0.0;
  r.hi = 1.0;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double u = base.nodes[i];
    r.nodes[i] = u * u * u;
    r.weights[i] = 3.0 * u * u * base.weights[i];
  }
  return r;
}

DiffuseField reconstruct_diffuse_at(std::span<const double> tau_pts,
                                    const RadiationField& field, int n_mu) {
  const int n = static_cast<int>(tau_pts.size());
  if (n < 4) throw std::invalid_argument("reconstruct_diffuse_at: need >= 4 points");
  DiffuseField d;
  d.tau_pts.assign(tau_pts.begin(), tau_pts.end());
  d.mu_rule = hemisphere_rule(n_mu);
  d.I_down.resize(n, n_mu);
  d.I_up.resize(n, n_mu);

  // isotropic source (omega/4pi) G_s at the sample points
  std::vector<double> src(n), zeros(n, 0.0);
  for (int i = 0; i < n; ++i)
    src[i] = field.albedo / (4.0 * M_PI) * field.total_intensity(tau_pts[i]);

  std::vector<double> rev(n), src_rev(n);
  for (int i = 0; i < n; ++i) {
    rev[i] = field.kappa - tau_pts[n - 1 - i];
    src_rev[i] = src[n - 1 - i];
  }

  const double bdry = field.I_D / M_PI;
  std::vector<double> g(n);
  for (int m = 0; m < n_mu; ++m) {
    const double mu = d.mu_rule.nodes[m];
    // downward: tau ascending along the sweep, entry I_D/pi at tau = 0
    auto segs = build_ray_segments(tau_pts, zeros, 0.0, 1.0 / mu);
    for (int i = 0; i < n; ++i) g[i] = src[i] / mu;
    auto psi = sweep_ray_real(segs, bdry, g);
    for (int i = 0; i < n; ++i) d.I_down(i, m) = psi[i];
    // upward: sweep from the bottom, zero entry
    auto segs_up = build_ray_segments(rev, zeros, 0.0, 1.0 / mu);
    for (int i = 0; i < n; ++i) g[i] = src_rev[i] / mu;
    auto psi_up = sweep_ray_real(segs_up, 0.0, g);
    for (int i = 0; i < n; ++i) d.I_up(n - 1 - i, m) = psi_up[i];
  }

  d.g_diff.assign(n, 0.0);
  d.flux_down.assign(n, 0.0);
  d.flux_x.assign(n, 0.0);
  d.flux_y.assign(n, 0.0);
  // phi integration of a phi-independent field: the cosine/sine sums vanish
  const int n_phi = 24;
  double cos_sum = 0.0, sin_sum = 0.0;
  for (int j = 0; j < n_phi; ++j) {
    const double phi = 2.0 * M_PI * (j + 0.5) / n_phi;
    cos_sum += 2.0 * M_PI / n_phi * std::cos(phi);
    sin_sum += 2.0 * M_PI / n_phi * std::sin(phi);
  }
  for (int i = 0; i < n; ++i) {
    double g0 = 0.0, fz = 0.0, fh = 0.0;
    for (int m = 0; m < n_mu; ++m) {
      const double mu = d.mu_rule.nodes[m], w = d.mu_rule.weights[m];
      g0 += w * (d.I_down(i, m) + d.I_up(i, m));
      fz += w * mu * (d.I_down(i, m) - d.I_up(i, m));
      fh += w * std::sqrt(std::max(0.0, 1.0 - mu * mu)) * (d.I_down(i, m) + d.I_up(i, m));
    }
    d.g_diff[i] = 2.0 * M_PI * g0;
    d.flux_down[i] = 2.0 * M_PI * fz;
    d.flux_x[i] = cos_sum * fh;
    d.flux_y[i] = sin_sum * fh;
  }
  return d;
}

void diffuse_flux(RadiationField& field, int n_mu) {
  if (field.lambda.empty()) throw std::logic_error("diffuse_flux: solve lambda first");
  const DiffuseField d = reconstruct_diffuse_at(field.tau_grid, field, n_mu);
  const int n = static_cast<int>(field.tau_grid.size());
  field.g_coll.resize(n);
  field.g_diff = d.g_diff;
  field.flux_mag.resize(n);
  for (int i = 0; i < n; ++i) {
    field.g_coll[i] = field.collimated(field.tau_grid[i]);
    field.flux_mag[i] = field.cos_theta0 * field.g_coll[i] + d.flux_down[i];
  }
}

std::vector<double> uniform_intensity(const SuspensionParams& params, double theta0,
                                      std::span<const double> z, int n_tau) {
  const RadiationField f = solve_lambda(params, theta0, n_tau);
  std::vector<double> g(z.size());
  for (std::size_t i = 0; i < z.size(); ++i)
    g[i] = f.total_intensity(f.kappa * (1.0 - z[i]));
  return g;
}

}  // namespace photobio
