#include "photobio/upswim.hpp"

#include <cmath>

namespace photobio {

StabilityOperator build_upswim_operator(const BasicState& state, const RadiationField& field,
                                        const StabilityOptions& opts, double k, double R) {
  const StabilityProblem prob(state, field, opts, ModelKind::Upswim);
  return prob.build_operator(k, R);
}

std::vector<ModelComparisonRow> compare_models(const BasicState& state,
                                               const RadiationField& field,
                                               const StabilityOptions& opts, double k_min,
                                               double k_max, int n_k) {
  const StabilityProblem full(state, field, opts, ModelKind::FullScattering);
  const StabilityProblem up(state, field, opts, ModelKind::Upswim);
  const NeutralCurve curve_full = full.trace_neutral_curve(k_min, k_max, n_k);
  const NeutralCurve curve_up = up.trace_neutral_curve(k_min, k_max, n_k);

  auto lowest_at = [](const NeutralCurve& c, double k, NeutralPoint& out) {
    bool found = false;
    for (const auto& p : c.stationary)
      if (p.k == k && (!found || p.R < out.R)) {
        out = p;
        found = true;
      }
    for (const auto& p : c.oscillatory)
      if (p.k == k && (!found || p.R < out.R)) {
        out = p;
        found = true;
      }
    return found;
  };

  std::vector<ModelComparisonRow> rows(n_k);
  for (int i = 0; i < n_k; ++i) {
    const double k = k_min * std::pow(k_max / k_min, static_cast<double>(i) / (n_k - 1));
    ModelComparisonRow& r = rows[i];
    r.k = k;
    NeutralPoint pf, pu;
    r.full_ok = lowest_at(curve_full, k, pf);
    r.upswim_ok = lowest_at(curve_up, k, pu);
    if (r.full_ok) {
      r.R_full = pf.R;
      r.branch_full = pf.branch;
    }
    if (r.upswim_ok) {
      r.R_upswim = pu.R;
      r.branch_upswim = pu.branch;
    }
    if (r.full_ok && r.upswim_ok) r.rel_diff = std::abs(r.R_full - r.R_upswim) / r.R_full;
  }
  return rows;
}

}  // namespace photobio
