#pragma once

#include "photobio/stability.hpp"

namespace photobio {

/// Comparison model: the basic column is shared with the scattering model,
/// but the perturbed optics attenuate the full intensity through the vertical
/// column while the diffuse contribution chi = G_s^d stays frozen.  The
/// scattering feedback term is absent by construction.
StabilityOperator build_upswim_operator(const BasicState& state, const RadiationField& field,
                                        const StabilityOptions& opts, double k, double R);

struct ModelComparisonRow {
  double k = 0.0;
  double R_full = 0.0, R_upswim = 0.0;
  Branch branch_full = Branch::Stationary, branch_upswim = Branch::Stationary;
  bool full_ok = false, upswim_ok = false;
  double rel_diff = 0.0;
};

/// Paired neutral curves of the two models over a log-spaced wavenumber sweep.
std::vector<ModelComparisonRow> compare_models(const BasicState& state,
                                               const RadiationField& field,
                                               const StabilityOptions& opts, double k_min,
                                               double k_max, int n_k);

}  // namespace photobio
