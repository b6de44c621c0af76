#pragma once

#include <vector>

#include "photobio/photomodel.hpp"
#include "photobio/radiative.hpp"

namespace photobio {

/// Equilibrium column: phototactic drift balancing diffusion.  All profiles
/// live on the uniform z-grid (z[0] = 0 bottom, z[n-1] = 1 top); tau is the
/// optical depth measured down from the top, so tau[n-1] = 0 and tau[0] = kappa.
struct BasicState {
  std::vector<double> z;
  std::vector<double> n_s;       // mean-normalized concentration
  std::vector<double> tau;       // kappa * int_z^1 n_s
  std::vector<double> G_s, G_coll, G_diff;  // total / collimated / diffuse intensity
  std::vector<double> dGs_dz;
  std::vector<double> q_s;       // radiative flux magnitude (direction -z)
  std::vector<double> T_s, dTs_dG;
  std::vector<double> sublayer_z;  // heights where G_s crosses the taxis root

  double n_top = 1.0;        // shooting unknown n_s(1)
  double cos_theta0 = 1.0;
  SuspensionParams params;
  TaxisFunction taxis{0.0, 0.0};
  bool taxis_off = false;

  int size() const { return static_cast<int>(z.size()); }
};

struct BasicStateOptions {
  int n_z = 151;
  double shoot_tol = 1e-10;     // on tau(0) - kappa
  int n_mu = 32;                // angular rule for the diffuse reconstruction
  bool taxis_off = false;       // degenerate T = 0 (uniform column)
};

/// Shooting solve of  dn_s/dz = V_c T(G_s) n_s,  dtau/dz = -kappa n_s,
/// with tau(1) = 0 and total optical thickness tau(0) = kappa.
/// The unknown n_s(1) is bracketed on a log scale and refined by secant.
BasicState solve_basic_state(const SuspensionParams& params, const RadiationField& field,
                             const BasicStateOptions& opts = {});

/// Heights where G_s crosses the actual taxis root, each located by bisection
/// on the spline of G_s.  Empty when the taxis sign never changes.
std::vector<double> find_sublayer(const BasicState& state);

}  // namespace photobio
