#include "photobio/basicstate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "photobio/gridop.hpp"

namespace photobio {

namespace {

struct ShootResult {
  std::vector<double> n_s, tau;
  double tau_bottom;
};

// RK4 sweep from the top (z = 1, tau = 0) down to z = 0.
ShootResult integrate_down(const SuspensionParams& p, const RadiationField& field,
                           const TaxisFunction& taxis, bool taxis_off, double n_top, int n_z) {
  const double h = 1.0 / (n_z - 1);
  ShootResult r;
  r.n_s.assign(n_z, 0.0);
  r.tau.assign(n_z, 0.0);
  r.n_s[n_z - 1] = n_top;
  r.tau[n_z - 1] = 0.0;

  auto rate = [&](double n, double tau) {
    const double g = field.total_intensity(std::clamp(tau, 0.0, field.kappa));
    const double t = taxis_off ? 0.0 : taxis.value(g);
    return std::pair<double, double>(p.swim_speed * t * n, -p.extinction * n);
  };

  double n = n_top, tau = 0.0;
  for (int i = n_z - 1; i > 0; --i) {
    const double dz = -h;
    const auto [k1n, k1t] = rate(n, tau);
    const auto [k2n, k2t] = rate(n + 0.5 * dz * k1n, tau + 0.5 * dz * k1t);
    const auto [k3n, k3t] = rate(n + 0.5 * dz * k2n, tau + 0.5 * dz * k2t);
    const auto [k4n, k4t] = rate(n + dz * k3n, tau + dz * k3t);
    n += dz / 6.0 * (k1n + 2.0 * k2n + 2.0 * k3n + k4n);
    tau += dz / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
    r.n_s[i - 1] = n;
    r.tau[i - 1] = tau;
  }
  r.tau_bottom = tau;
  return r;
}

}  // namespace

BasicState solve_basic_state(const SuspensionParams& params, const RadiationField& field,
                             const BasicStateOptions& opts) {
  params.validate();
  if (opts.n_z < 65) throw std::invalid_argument("solve_basic_state: n_z must be >= 65");

  const TaxisFunction taxis = TaxisFunction::make(params.taxis);
  const double kappa = params.extinction;

  auto residual = [&](double n_top) {
    return integrate_down(params, field, taxis, opts.taxis_off, n_top, opts.n_z).tau_bottom -
           kappa;
  };

  // bracket scan for n_s(1) on a log grid; tau(0) grows with n_s(1)
  const int n_scan = 61;
  double lo = 0.0, hi = 0.0, flo = 0.0, fhi = 0.0;
  bool found = false;
  double prev_eta = 1e-4, prev_f = residual(prev_eta);
  for (int i = 1; i < n_scan && !found; ++i) {
    const double eta = 1e-4 * std::pow(50.0 / 1e-4, static_cast<double>(i) / (n_scan - 1));
    const double f = residual(eta);
    if (prev_f <= 0.0 && f >= 0.0) {
      lo = prev_eta;
      hi = eta;
      flo = prev_f;
      fhi = f;
      found = true;
    }
    prev_eta = eta;
    prev_f = f;
  }
  if (!found)
    throw std::runtime_error(
        "solve_basic_state: no shooting bracket for n_s(1) in [1e-4, 50]");

  // secant with bisection fallback
  double a = lo, b = hi, fa = flo, fb = fhi;
  double x = b, fx = fb;
  for (int it = 0; it < 200 && std::abs(fx) > opts.shoot_tol; ++it) {
    x = (std::abs(fb - fa) > 1e-300) ? b - fb * (b - a) / (fb - fa) : 0.5 * (a + b);
    if (!(x > lo && x < hi)) x = 0.5 * (a + b);
    fx = residual(x);
    if (fx > 0.0) {
      b = x;
      fb = fx;
    } else {
      a = x;
      fa = fx;
    }
    lo = a;
    hi = b;
  }
  if (std::abs(fx) > opts.shoot_tol)
    throw std::runtime_error("solve_basic_state: shooting stalled, residual " +
                             std::to_string(fx));

  const ShootResult sol = integrate_down(params, field, taxis, opts.taxis_off, x, opts.n_z);

  BasicState st;
  st.params = params;
  st.taxis = taxis;
  st.taxis_off = opts.taxis_off;
  st.n_top = x;
  st.cos_theta0 = field.cos_theta0;
  const int n = opts.n_z;
  st.z.resize(n);
  for (int i = 0; i < n; ++i) st.z[i] = static_cast<double>(i) / (n - 1);
  st.n_s = sol.n_s;
  st.tau = sol.tau;
  st.tau[n - 1] = 0.0;

  st.G_s.resize(n);
  st.G_coll.resize(n);
  st.T_s.resize(n);
  st.dTs_dG.resize(n);
  for (int i = 0; i < n; ++i) {
    const double tau = std::clamp(st.tau[i], 0.0, kappa);
    st.G_s[i] = field.total_intensity(tau);
    st.G_coll[i] = field.collimated(tau);
    st.T_s[i] = opts.taxis_off ? 0.0 : taxis.value(st.G_s[i]);
    st.dTs_dG[i] = opts.taxis_off ? 0.0 : taxis.slope(st.G_s[i]);
  }

  // diffuse part and flux at the column's own optical depths (ascending order)
  std::vector<double> tau_asc(n);
  for (int i = 0; i < n; ++i) tau_asc[i] = std::clamp(st.tau[n - 1 - i], 0.0, kappa);
  tau_asc.front() = 0.0;
  const DiffuseField d = reconstruct_diffuse_at(tau_asc, field, opts.n_mu);
  st.G_diff.resize(n);
  st.q_s.resize(n);
  for (int i = 0; i < n; ++i) {
    st.G_diff[i] = d.g_diff[n - 1 - i];
    st.q_s[i] = st.cos_theta0 * st.G_coll[i] + d.flux_down[n - 1 - i];
  }

  const DiffMatrices& dm = DiffMatrices::get(n);
  Eigen::Map<const Eigen::VectorXd> gs(st.G_s.data(), n);
  Eigen::VectorXd dg = dm.d1 * gs;
  st.dGs_dz.assign(dg.data(), dg.data() + n);

  st.sublayer_z = find_sublayer(st);
  return st;
}

std::vector<double> find_sublayer(const BasicState& state) {
  std::vector<double> out;
  if (state.taxis_off) return out;
  const double root = state.taxis.root();
  const CubicSpline g_spline(state.z, state.G_s);
  const int n = state.size();
  for (int i = 0; i + 1 < n; ++i) {
    const double f0 = state.G_s[i] - root;
    const double f1 = state.G_s[i + 1] - root;
    if (f0 == 0.0) {
      out.push_back(state.z[i]);
      continue;
    }
    if (f0 * f1 < 0.0) {
      double a = state.z[i], b = state.z[i + 1];
      for (int it = 0; it < 100 && b - a > 1e-8; ++it) {
        const double mid = 0.5 * (a + b);
        ((g_spline(mid) - root) * f0 > 0.0 ? a : b) = mid;
      }
      out.push_back(0.5 * (a + b));
    }
  }
  if (!out.empty() && state.G_s[n - 1] == root) out.push_back(1.0);
  return out;
}

}  // namespace photobio
