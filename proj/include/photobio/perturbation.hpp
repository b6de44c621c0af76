#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>

#include "photobio/basicstate.hpp"

namespace photobio {

using Complex = std::complex<double>;

struct AngularOptions {
  int n_mu = 16;   // Gauss nodes per mu-hemisphere
  int n_phi = 24;  // offset-trapezoid azimuthal nodes (multiple of 4)
};

struct SourceIterOptions {
  double tol = 1e-9;  // sup-norm change of the diffuse moment
  int max_iter = 400;
  // plain Picard; near-conservative scattering is damped
  double relax_strong_albedo = 0.5;
};

/// Normal-mode radiation perturbation amplitudes on the z-grid.
struct PerturbedRadiation {
  Eigen::VectorXcd g_coll;   // collimated moment
  Eigen::VectorXcd g_diff;   // diffuse moment
  Eigen::VectorXcd flux_x;   // P, horizontal flux along the wavevector
  Eigen::VectorXcd flux_y;   // Q, transverse (vanishes at m = 0)
  int iterations = 0;
  double final_change = 0.0;
};

/// Coefficient functions multiplying the concentration unknowns.
struct GammaCoefficients {
  Eigen::VectorXcd gamma0;
  Eigen::VectorXd gamma1;
  Eigen::VectorXd gamma2;
};

/// Dense linear maps theta -> radiation moments.  At a horizontal wavevector
/// aligned with x, opposite azimuths carry conjugate intensities, so for real
/// theta the diffuse moment is real and P is purely imaginary:
///   g_diff = g_diff_map * theta,   P = i * flux_x_imag * theta.
struct RadiationCoupling {
  Eigen::MatrixXd g_coll;       // theta -> collimated moment
  Eigen::MatrixXd g_diff;       // theta -> diffuse moment
  Eigen::MatrixXd flux_x_imag;  // theta -> Im P
};

/// Precomputed geometry shared by every perturbed-radiation solve on a state:
/// the cumulative-integration matrix, the collimated response, and the basic
/// diffuse intensity sampled at the perturbation's own angular nodes.
struct PerturbationSetup {
  const BasicState* state = nullptr;
  const RadiationField* field = nullptr;
  AngularOptions ang;
  Eigen::MatrixXd int_from_top;       // (J f)_i = int_{z_i}^1 f dz
  Eigen::MatrixXd g_coll_map;         // theta -> collimated moment
  QuadratureRule mu_rule;             // per hemisphere
  Eigen::MatrixXd Id_down, Id_up;     // basic diffuse intensity (z x mu)
};

PerturbationSetup make_perturbation_setup(const BasicState& state,
                                          const RadiationField& field,
                                          const AngularOptions& ang = {});

/// Collimated intensity perturbation for a given concentration amplitude.
Eigen::VectorXcd perturbed_collimated(const PerturbationSetup& setup,
                                      std::span<const Complex> theta);

/// Source iteration on the perturbed transfer equation at wavenumber k
/// (wavevector along x).  Entering intensities vanish at both walls.
PerturbedRadiation solve_perturbed_rte(const PerturbationSetup& setup,
                                       std::span<const Complex> theta, double k,
                                       const SourceIterOptions& iter = {});

/// Direct matrix realization of the same maps (columns are unit-theta
/// responses), via the resolvent of the scattering source.
RadiationCoupling radiation_coupling_matrices(const PerturbationSetup& setup, double k);

/// Gamma profiles for one perturbed-radiation solution.
GammaCoefficients gamma_coefficients(const BasicState& state, const PerturbedRadiation& pert,
                                     double k);

}  // namespace photobio
