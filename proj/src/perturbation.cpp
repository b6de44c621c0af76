#include "photobio/perturbation.hpp"

#include <cmath>
#include <stdexcept>

#include "photobio/gridop.hpp"
#include "photobio/raytrace.hpp"

namespace photobio {

namespace {

struct RayGeometry {
  double mu;      // |direction cosine|
  double xi;      // horizontal cosine along the wavevector
  double weight;  // solid-angle weight of the represented set
  bool down;      // propagates toward z = 0
};

// Azimuthal nodes restricted to a quadrant or half-circle; opposite azimuths
// carry identical intensity and mirrored ones the conjugate, so the weight
// multiplies the represented copies.
std::vector<RayGeometry> make_rays(const QuadratureRule& mu_rule, int n_phi, bool quarter) {
  std::vector<RayGeometry> rays;
  const int n_half = n_phi / 2, n_quarter = n_phi / 4;
  const int jmax = quarter ? n_quarter : n_half;
  const double copies = quarter ? 4.0 : 2.0;
  for (int hemi = 0; hemi < 2; ++hemi) {
    for (std::size_t m = 0; m < mu_rule.nodes.size(); ++m) {
      const double mu = mu_rule.nodes[m];
      const double sin_theta = std::sqrt(std::max(0.0, 1.0 - mu * mu));
      for (int j = 0; j < jmax; ++j) {
        const double phi = 2.0 * M_PI * (j + 0.5) / n_phi;
        rays.push_back({mu, sin_theta * std::cos(phi),
                        copies * (2.0 * M_PI / n_phi) * mu_rule.weights[m], hemi == 0});
      }
    }
  }
  return rays;
}

}  // namespace

PerturbationSetup make_perturbation_setup(const BasicState& state,
                                          const RadiationField& field,
                                          const AngularOptions& ang) {
  if (ang.n_phi % 4 != 0) throw std::invalid_argument("angular rule: n_phi must be a multiple of 4");
  PerturbationSetup s;
  s.state = &state;
  s.field = &field;
  s.ang = ang;
  const int n = state.size();
  s.int_from_top = integrate_from_top_matrix(n);

  const double mu0 = state.cos_theta0;
  const double kcoef = state.params.extinction / mu0;
  s.g_coll_map.resize(n, n);
  for (int i = 0; i < n; ++i) s.g_coll_map.row(i) = -kcoef * state.G_coll[i] * s.int_from_top.row(i);

  // basic diffuse intensity at this rule's nodes, stored in z order
  std::vector<double> tau_asc(n);
  for (int i = 0; i < n; ++i)
    tau_asc[i] = std::clamp(state.tau[n - 1 - i], 0.0, field.kappa);
  tau_asc.front() = 0.0;
  const DiffuseField d = reconstruct_diffuse_at(tau_asc, field, ang.n_mu);
  s.mu_rule = d.mu_rule;
  s.Id_down.resize(n, ang.n_mu);
  s.Id_up.resize(n, ang.n_mu);
  for (int i = 0; i < n; ++i) {
    s.Id_down.row(i) = d.I_down.row(n - 1 - i);
    s.Id_up.row(i) = d.I_up.row(n - 1 - i);
  }
  return s;
}

Eigen::VectorXcd perturbed_collimated(const PerturbationSetup& setup,
                                      std::span<const Complex> theta) {
  const int n = setup.state->size();
  Eigen::VectorXd re(n), im(n);
  for (int i = 0; i < n; ++i) {
    re(i) = theta[i].real();
    im(i) = theta[i].imag();
  }
  Eigen::VectorXcd out(n);
  out.real() = setup.g_coll_map * re;
  out.imag() = setup.g_coll_map * im;
  return out;
}

PerturbedRadiation solve_perturbed_rte(const PerturbationSetup& setup,
                                       std::span<const Complex> theta, double k,
                                       const SourceIterOptions& iter) {
  const BasicState& st = *setup.state;
  const int n = st.size();
  if (static_cast<int>(theta.size()) != n)
    throw std::invalid_argument("solve_perturbed_rte: theta size mismatch");

  PerturbedRadiation out;
  out.g_coll = perturbed_collimated(setup, theta);
  out.g_diff = Eigen::VectorXcd::Zero(n);
  out.flux_x = Eigen::VectorXcd::Zero(n);
  out.flux_y = Eigen::VectorXcd::Zero(n);

  const double omega = st.params.albedo;
  const double kappa = st.params.extinction;
  if (omega == 0.0) return out;  // no scattering source and zero entering data

  const auto rays = make_rays(setup.mu_rule, setup.ang.n_phi, /*quarter=*/false);
  const double relax = (omega >= 0.9) ? iter.relax_strong_albedo : 1.0;

  // per-ray segments are k- and geometry-dependent only
  std::vector<std::vector<RaySegment>> segs(rays.size());
  std::vector<double> zgrid(st.z), ns_rev(n);
  for (int i = 0; i < n; ++i) ns_rev[i] = st.n_s[n - 1 - i];
  for (std::size_t r = 0; r < rays.size(); ++r) {
    const auto& ray = rays[r];
    const Complex a_const(0.0, k * ray.xi / ray.mu);
    segs[r] = build_ray_segments(zgrid, ray.down ? ns_rev : st.n_s, kappa / ray.mu, a_const);
  }

  Eigen::VectorXcd rhs(n), rhs_sweep(n);
  for (int it = 0; it < iter.max_iter; ++it) {
    Eigen::VectorXcd gd_new = Eigen::VectorXcd::Zero(n);
    Eigen::VectorXcd p_new = Eigen::VectorXcd::Zero(n);
    for (std::size_t r = 0; r < rays.size(); ++r) {
      const auto& ray = rays[r];
      const Eigen::MatrixXd& Id = ray.down ? setup.Id_down : setup.Id_up;
      int mu_idx = 0;
      while (setup.mu_rule.nodes[mu_idx] != ray.mu) ++mu_idx;
      for (int i = 0; i < n; ++i) {
        const Complex iso = omega * kappa / (4.0 * M_PI) *
                            (st.n_s[i] * (out.g_coll(i) + out.g_diff(i)) + st.G_s[i] * theta[i]);
        rhs(i) = (iso - kappa * Id(i, mu_idx) * theta[i]) / ray.mu;
      }
      if (ray.down)
        for (int i = 0; i < n; ++i) rhs_sweep(i) = rhs(n - 1 - i);
      else
        rhs_sweep = rhs;
      auto psi = sweep_ray(segs[r], 0.0, std::span<const Complex>(rhs_sweep.data(), n));
      for (int i = 0; i < n; ++i) {
        const Complex v = ray.down ? psi[n - 1 - i] : psi[i];
        gd_new(i) += ray.weight * v;
        p_new(i) += ray.weight * ray.xi * v;
      }
    }
    const double change = (gd_new - out.g_diff).lpNorm<Eigen::Infinity>();
    out.g_diff = relax * gd_new + (1.0 - relax) * out.g_diff;
    out.flux_x = relax * p_new + (1.0 - relax) * out.flux_x;
    out.iterations = it + 1;
    out.final_change = change;
    if (change < iter.tol) break;
  }
  if (out.final_change >= iter.tol)
    throw std::runtime_error("solve_perturbed_rte: source iteration stalled at change " +
                             std::to_string(out.final_change));
  // opposite azimuths carry equal intensity, so the sine moment cancels
  out.flux_y.setZero();
  return out;
}

RadiationCoupling radiation_coupling_matrices(const PerturbationSetup& setup, double k) {
  const BasicState& st = *setup.state;
  const int n = st.size();
  RadiationCoupling c;
  c.g_coll = setup.g_coll_map;
  c.g_diff = Eigen::MatrixXd::Zero(n, n);
  c.flux_x_imag = Eigen::MatrixXd::Zero(n, n);

  const double omega = st.params.albedo;
  const double kappa = st.params.extinction;
  if (omega == 0.0) return c;

  const auto rays = make_rays(setup.mu_rule, setup.ang.n_phi, /*quarter=*/true);
  Eigen::MatrixXcd accG = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd accP = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd accGE = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd accPE = Eigen::MatrixXcd::Zero(n, n);

  std::vector<double> ns_rev(n), ext(n);
  for (int i = 0; i < n; ++i) ns_rev[i] = st.n_s[n - 1 - i];
  for (const auto& ray : rays) {
    const Complex a_const(0.0, k * ray.xi / ray.mu);
    const auto segs =
        build_ray_segments(st.z, ray.down ? ns_rev : st.n_s, kappa / ray.mu, a_const);
    const Eigen::MatrixXd& Id = ray.down ? setup.Id_down : setup.Id_up;
    int mu_idx = 0;
    while (setup.mu_rule.nodes[mu_idx] != ray.mu) ++mu_idx;
    for (int i = 0; i < n; ++i) ext[i] = -kappa * Id(i, mu_idx);

    const double wmu = ray.weight / ray.mu;
    accumulate_ray_response(segs, wmu, ray.down, accG);
    accumulate_ray_response(segs, wmu * ray.xi, ray.down, accP);
    accumulate_ray_response(segs, wmu, ray.down, accGE, ext);
    accumulate_ray_response(segs, wmu * ray.xi, ray.down, accPE, ext);
  }

  const double c4 = omega * kappa / (4.0 * M_PI);
  const Eigen::MatrixXd R_G = accG.real(), R_P = accP.imag();
  const Eigen::MatrixXd E_G = accGE.real(), E_P = accPE.imag();
  const Eigen::VectorXd ns = Eigen::Map<const Eigen::VectorXd>(st.n_s.data(), n);
  const Eigen::VectorXd gs = Eigen::Map<const Eigen::VectorXd>(st.G_s.data(), n);

  Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n, n) - c4 * R_G * ns.asDiagonal();
  Eigen::MatrixXd rhs =
      c4 * R_G * (ns.asDiagonal() * setup.g_coll_map + Eigen::MatrixXd(gs.asDiagonal())) + E_G;
  c.g_diff = lhs.partialPivLu().solve(rhs);
  c.flux_x_imag =
      c4 * R_P * (ns.asDiagonal() * (setup.g_coll_map + c.g_diff) + Eigen::MatrixXd(gs.asDiagonal())) +
      E_P;
  return c;
}

GammaCoefficients gamma_coefficients(const BasicState& state, const PerturbedRadiation& pert,
                                     double k) {
  const int n = state.size();
  const DiffMatrices& dm = DiffMatrices::get(n);
  const double vc = state.params.swim_speed;
  const double kcoef = state.params.extinction / state.cos_theta0;

  GammaCoefficients g;
  Eigen::VectorXcd prod(n);
  Eigen::VectorXcd flux_term(n);
  for (int i = 0; i < n; ++i) {
    if (!(state.q_s[i] > 0.0))
      throw std::runtime_error("gamma_coefficients: vanishing basic radiative flux");
    prod(i) = state.n_s[i] * state.dTs_dG[i] * pert.g_diff(i);
    flux_term(i) = Complex(0.0, 1.0) * vc * state.n_s[i] * state.T_s[i] / state.q_s[i] * k *
                   pert.flux_x(i);
  }
  g.gamma0 = vc * (dm.d1 * prod) - flux_term;

  Eigen::VectorXd ngt(n), gdiff(n);
  for (int i = 0; i < n; ++i) {
    ngt(i) = state.n_s[i] * state.G_coll[i] * state.dTs_dG[i];
    gdiff(i) = state.G_diff[i];
  }
  g.gamma1 = kcoef * vc * (dm.d1 * ngt);
  const Eigen::VectorXd dgdiff = dm.d1 * gdiff;
  g.gamma2.resize(n);
  for (int i = 0; i < n; ++i)
    g.gamma2(i) = 2.0 * kcoef * vc * ngt(i) + vc * state.dTs_dG[i] * dgdiff(i);
  return g;
}

}  // namespace photobio
