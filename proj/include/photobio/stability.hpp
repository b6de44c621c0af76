#pragma once

#include <Eigen/Dense>
#include <complex>
#include <mutex>
#include <optional>
#include <vector>

#include "photobio/basicstate.hpp"
#include "photobio/perturbation.hpp"

namespace photobio {

enum class Branch { Stationary, Oscillatory };
enum class ModelKind { FullScattering, Upswim };

/// Discrete eigenproblem A x = gamma B x for the coupled (W, Phi) system.
/// x stacks W then Phi on the shared z-grid; boundary rows carry zero B.
/// At a wavevector along x the coefficients are real, so the spectrum comes
/// in conjugate pairs by construction.
struct StabilityOperator {
  Eigen::MatrixXd A, B;
  int n_z = 0;
  double k = 0.0, R = 0.0;
  ModelKind model = ModelKind::FullScattering;
};

struct NeutralPoint {
  double k = 0.0;
  double R = 0.0;
  double frequency = 0.0;  // Im gamma at the crossing
  Branch branch = Branch::Stationary;
};

struct NeutralCurve {
  std::vector<NeutralPoint> stationary;
  std::vector<NeutralPoint> oscillatory;
  std::vector<double> gaps;  // wavenumbers where no crossing was found
};

struct CriticalSolution {
  double k_c = 0.0, R_c = 0.0, lambda_c = 0.0;
  double frequency = 0.0;
  int mode = 0;
  bool overstable = false;
};

struct Eigenpair {
  std::complex<double> gamma;
  Eigen::VectorXcd W, Phi;
  double residual = 0.0;  // ||A x - gamma B x|| / (||A|| ||x||)
};

struct StabilityOptions {
  int n_z = 151;
  AngularOptions ang;
  double r_min = 1.0, r_max = 5000.0;
  int r_panels = 12;
  double neutral_tol = 1e-6;  // |Re gamma| <= tol * max(1, |gamma|)
  double im_tol = 1e-6;       // stationary / oscillatory split
  int threads = 1;
  double golden_tol = 1e-4;   // relative k-width for the critical refinement
};

/// Growth-rate machinery for one solved basic state.  Radiation coupling
/// matrices are built once per wavenumber and reused across Rayleigh numbers.
class StabilityProblem {
 public:
  StabilityProblem(const BasicState& state, const RadiationField& field,
                   StabilityOptions opts, ModelKind model = ModelKind::FullScattering);

  StabilityOperator build_operator(double k, double R) const;
  std::vector<std::complex<double>> growth_spectrum(const StabilityOperator& op) const;
  Eigenpair eigenpair_near(const StabilityOperator& op, std::complex<double> target) const;
  Eigenpair leading_eigenpair(const StabilityOperator& op) const;

  /// First Rayleigh number at which the given family's leading growth rate
  /// crosses zero.  Stationary tracks real eigenvalues, oscillatory the
  /// complex pairs; nullopt when the family never crosses inside the bracket.
  std::optional<NeutralPoint> neutral_R(double k, Branch branch,
                                        double seed = 0.0) const;

  NeutralCurve trace_neutral_curve(double k_min, double k_max, int n_k) const;

  /// Largest wavenumber admitting an oscillatory crossing, refined between
  /// sweep points; nullopt when the whole sweep is stationary.
  std::optional<double> oscillatory_junction(const NeutralCurve& curve) const;

  CriticalSolution find_critical(const NeutralCurve& curve) const;

  /// Eigenpair at a neutral point (leading member of its branch family).
  Eigenpair neutral_eigenpair(const NeutralPoint& pt) const;

  const StabilityOptions& options() const { return opts_; }
  const BasicState& state() const { return *state_; }
  const PerturbationSetup& setup() const { return setup_; }
  const RadiationCoupling& coupling(double k) const;

 private:
  const BasicState* state_;
  const RadiationField* field_;
  StabilityOptions opts_;
  ModelKind model_;
  PerturbationSetup setup_;
  mutable std::vector<std::pair<double, RadiationCoupling>> coupling_cache_;
  mutable std::mutex cache_mutex_;

  struct Crossing {
    double R;
    std::complex<double> gamma;
  };
  std::optional<Crossing> find_crossing(double k, Branch branch, double seed) const;
  double branch_rate(const std::vector<std::complex<double>>& spec, Branch branch,
                     std::complex<double>* which = nullptr) const;
};

/// Convection cells stacked vertically: 1 + sign changes of Re W after
/// rotating the largest sample onto the positive real axis.
int classify_mode(const Eigenpair& pair);

/// w1(x, z, t) = Re[ W(z) exp(gamma t + i k x) ] on an n_x uniform period.
Eigen::MatrixXd eigenfunction_field(const Eigenpair& pair, double k, int n_x, double t);

}  // namespace photobio
