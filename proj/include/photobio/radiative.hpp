#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "photobio/gridop.hpp"
#include "photobio/photomodel.hpp"
#include "photobio/specfun.hpp"

namespace photobio {

/// Equilibrium radiation in optical-depth coordinates.  The total intensity
/// is G_s(tau) = I_t * Lambda(tau); tau runs over [0, kappa] because the mean
/// concentration is one, so the slab always has total optical thickness kappa.
struct RadiationField {
  std::vector<double> tau_grid;   // graded, ascending, endpoints 0 and kappa
  std::vector<double> lambda;     // Lambda(tau) = G_s / I_t
  // filled by reconstruct_diffuse (absolute intensity units):
  std::vector<double> g_coll, g_diff, flux_mag;

  double kappa = 0.0;
  double cos_theta0 = 1.0;
  double albedo = 0.0;
  double I_t = 1.0;
  double I_D = 0.0;

  CubicSpline lambda_spline;

  double lambda_at(double tau) const { return lambda_spline(tau); }
  double total_intensity(double tau) const { return I_t * lambda_spline(tau); }
  double collimated(double tau) const;  // I_t exp(-tau / cos theta_0)
};

/// Solve the total-intensity integral equation
///   Lambda(tau) = (omega/2) int_0^kappa Lambda(t) E_1(|tau - t|) dt
///                 + exp(-tau/cos theta_0) + 2 (I_D/I_t) E_2(tau)
/// by Nystrom collocation: the E_1 kernel is integrated in closed form
/// against local cubics of Lambda, and the singular diagonal uses the
/// exact identity  int_0^kappa E_1(|tau - t|) dt = 2 - E_2(tau) - E_2(kappa - tau).
/// The grid is graded toward both faces, where Lambda has weak log layers.
RadiationField solve_lambda(const SuspensionParams& params, double theta0, int n_tau);

/// Product-integration weights W with (W y)_i ~ int_0^kappa E_order(|tau_i - t|) y(t) dt
/// for y sampled on pts (ascending within [0, kappa]).
Eigen::MatrixXd kernel_weights(std::span<const double> pts, double kappa, int order);

/// Jacobi / fixed-point sweep residual of the solved field (verification path).
double lambda_fixed_point_residual(const RadiationField& field);

/// Gauss rule in mu on (0, 1) under the cubic map mu = u^3.  Slab intensities
/// develop direction boundary layers at grazing angles near the faces; the
/// clustering resolves them while plain Gauss stalls near 1e-4.
QuadratureRule hemisphere_rule(int n);

/// Diffuse angular field at arbitrary optical depths: the formal solution of
/// the slab transfer equation with isotropic source (omega/4pi) G_s(tau) and
/// boundary values I_D/pi entering the top, zero entering the bottom.
struct DiffuseField {
  std::vector<double> tau_pts;
  QuadratureRule mu_rule;          // per-hemisphere rule on (0, 1)
  Eigen::MatrixXd I_down, I_up;    // (n_pts x n_mu), absolute units
  std::vector<double> g_diff;      // 2pi int (I_down + I_up) dmu
  std::vector<double> flux_down;   // 2pi int mu (I_down - I_up) dmu  (>= 0)
  std::vector<double> flux_x, flux_y;  // horizontal moments (vanish)
};

DiffuseField reconstruct_diffuse_at(std::span<const double> tau_pts,
                                    const RadiationField& field, int n_mu);

/// Populate g_coll / g_diff / flux_mag on the field's own grid
/// (flux_mag = cos theta_0 G_s^c + downward diffuse flux).
void diffuse_flux(RadiationField& field, int n_mu = 32);

/// Total intensity G_s across a uniform suspension (n = 1), where
/// tau = kappa (1 - z).
std::vector<double> uniform_intensity(const SuspensionParams& params, double theta0,
                                      std::span<const double> z, int n_tau = 201);

}  // namespace photobio
