#include "photobio/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "photobio/csvio.hpp"
#include "photobio/tables.hpp"
#include "photobio/upswim.hpp"

namespace photobio {

namespace {

std::string out_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

std::string data_ext(const RunConfig& cfg) {
  return cfg.format == OutputFormat::Csv ? ".csv" : ".ndjson";
}

void write_neutral_curve(const RunConfig& cfg, const NeutralCurve& curve,
                         const std::string& name) {
  TableWriter w(out_path(cfg, name + data_ext(cfg)), cfg.format,
                {"k", "R", "Im_gamma", "branch"});
  for (const auto& p : curve.stationary)
    w.row({p.k, p.R, p.frequency, branch_name(p.branch)});
  for (const auto& p : curve.oscillatory)
    w.row({p.k, p.R, p.frequency, branch_name(p.branch)});
  for (double k : curve.gaps)
    w.comment("no neutral point in R range at k = " + TableWriter::format_number(k));
}

}  // namespace

Pipeline solve_pipeline(const RunConfig& cfg) {
  cfg.suspension.validate();
  Pipeline p;
  p.theta0 = cfg.suspension.refraction();
  p.field = solve_lambda(cfg.suspension, p.theta0, cfg.n_tau);
  BasicStateOptions bopt;
  bopt.n_z = cfg.n_z;
  bopt.n_mu = cfg.n_mu_basic;
  bopt.taxis_off = cfg.taxis_off;
  p.state = solve_basic_state(cfg.suspension, p.field, bopt);
  return p;
}

int cmd_basic_state(const RunConfig& cfg) {
  Pipeline p = solve_pipeline(cfg);
  const BasicState& st = p.state;
  TableWriter w(out_path(cfg, std::string("basic_state") + data_ext(cfg)), cfg.format,
                {"z", "n_s", "G_s", "G_s_coll", "G_s_diff", "q_s", "T_s"});
  for (int i = 0; i < st.size(); ++i)
    w.row({st.z[i], st.n_s[i], st.G_s[i], st.G_coll[i], st.G_diff[i], st.q_s[i], st.T_s[i]});

  std::ofstream sub(out_path(cfg, "sublayer.txt"));
  if (st.sublayer_z.empty()) {
    sub << "no sublayer: the taxis response does not change sign in the column\n";
  } else {
    for (double z : st.sublayer_z) sub << TableWriter::format_number(z) << "\n";
  }
  return 0;
}

int cmd_uniform_intensity(const RunConfig& cfg) {
  cfg.suspension.validate();
  const double theta0 = cfg.suspension.refraction();
  RadiationField field = solve_lambda(cfg.suspension, theta0, cfg.n_tau);
  diffuse_flux(field, cfg.n_mu_basic);

  TableWriter w(out_path(cfg, std::string("uniform_intensity") + data_ext(cfg)), cfg.format,
                {"z", "tau", "Lambda", "G_s_coll", "G_s_diff", "q_s"});
  const int n = static_cast<int>(field.tau_grid.size());
  for (int i = n - 1; i >= 0; --i) {
    const double tau = field.tau_grid[i];
    w.row({1.0 - tau / field.kappa, tau, field.lambda[i], field.g_coll[i], field.g_diff[i],
           field.flux_mag[i]});
  }
  return 0;
}

int cmd_neutral_curve(const RunConfig& cfg) {
  if (!(cfg.k_min > 0.0 && cfg.k_max > cfg.k_min))
    throw ConfigError("neutral-curve: need 0 < k_min < k_max");
  Pipeline p = solve_pipeline(cfg);
  StabilityProblem prob(p.state, p.field, cfg.stability_options());
  const NeutralCurve curve = prob.trace_neutral_curve(cfg.k_min, cfg.k_max, cfg.n_k);
  write_neutral_curve(cfg, curve, "neutral_curve");
  return 0;
}

int cmd_critical(const RunConfig& cfg) {
  Pipeline p = solve_pipeline(cfg);
  StabilityProblem prob(p.state, p.field, cfg.stability_options());
  const NeutralCurve curve = prob.trace_neutral_curve(cfg.k_min, cfg.k_max, cfg.n_k);
  write_neutral_curve(cfg, curve, "neutral_curve");
  const CriticalSolution sol = prob.find_critical(curve);
  TableWriter w(out_path(cfg, std::string("critical") + data_ext(cfg)), cfg.format,
                {"k_c", "R_c", "lambda_c", "Im_gamma", "mode", "overstable"});
  w.row({sol.k_c, sol.R_c, sol.lambda_c, sol.frequency, static_cast<long long>(sol.mode),
         static_cast<long long>(sol.overstable ? 1 : 0)});
  return 0;
}

int cmd_reproduce_table(const RunConfig& cfg, const std::string& tables_path) {
  const auto rows = reference_table(tables_path, cfg.table_id);
  TableWriter w(out_path(cfg, "table" + std::to_string(cfg.table_id) + data_ext(cfg)),
                cfg.format,
                {"row", "V_c", "kappa", "I_D", "theta_i", "lambda_c_ref", "R_c_ref",
                 "im_gamma_ref", "mode_ref", "lambda_c", "R_c", "im_gamma", "mode",
                 "overstable", "rel_err_R", "rel_err_lambda", "status"});
  for (const auto& ref : rows) {
    if (!cfg.table_rows.empty() &&
        std::find(cfg.table_rows.begin(), cfg.table_rows.end(), ref.row) ==
            cfg.table_rows.end())
      continue;
    RunConfig row_cfg = cfg;
    row_cfg.suspension = ref.params();
    row_cfg.suspension.top_bc = cfg.suspension.top_bc;
    try {
      Pipeline p = solve_pipeline(row_cfg);
      StabilityProblem prob(p.state, p.field, row_cfg.stability_options());
      const NeutralCurve curve = prob.trace_neutral_curve(row_cfg.k_min, row_cfg.k_max,
                                                          row_cfg.n_k);
      const CriticalSolution sol = prob.find_critical(curve);
      w.row({static_cast<long long>(ref.row), ref.V_c, ref.kappa, ref.I_D, ref.theta_i,
             ref.lambda_c, ref.R_c, ref.im_gamma, static_cast<long long>(ref.mode),
             sol.lambda_c, sol.R_c, sol.frequency, static_cast<long long>(sol.mode),
             static_cast<long long>(sol.overstable ? 1 : 0),
             std::abs(sol.R_c - ref.R_c) / ref.R_c,
             std::abs(sol.lambda_c - ref.lambda_c) / ref.lambda_c, std::string("ok")});
    } catch (const std::exception& e) {
      w.row({static_cast<long long>(ref.row), ref.V_c, ref.kappa, ref.I_D, ref.theta_i,
             ref.lambda_c, ref.R_c, ref.im_gamma, static_cast<long long>(ref.mode), 0.0, 0.0,
             0.0, static_cast<long long>(0), static_cast<long long>(0), 0.0, 0.0,
             std::string("failed: ") + e.what()});
    }
  }
  return 0;
}

int cmd_mode_field(const RunConfig& cfg) {
  if (!(cfg.field_k > 0.0 && cfg.field_R > 0.0))
    throw ConfigError("mode-field: set k and R in [mode_field]");
  Pipeline p = solve_pipeline(cfg);
  StabilityProblem prob(p.state, p.field, cfg.stability_options());
  const StabilityOperator op = prob.build_operator(cfg.field_k, cfg.field_R);
  const Eigenpair pair = prob.leading_eigenpair(op);

  const double scale = std::max(1.0, std::abs(pair.gamma));
  const bool near_neutral = std::abs(pair.gamma.real()) <= 1e-3 * scale;
  if (!near_neutral)
    std::cerr << "mode-field: (k, R) is not near-neutral, leading Re(gamma) = "
              << pair.gamma.real() << "\n";

  const bool oscillatory = std::abs(pair.gamma.imag()) > 1e-6 * scale;
  std::vector<double> times = cfg.field_times;
  if (times.empty()) {
    if (oscillatory) {
      const double period = 2.0 * M_PI / std::abs(pair.gamma.imag());
      for (int f = 0; f < cfg.field_frames; ++f)
        times.push_back(period * f / cfg.field_frames);
    } else {
      times.push_back(0.0);
    }
  }

  const int n_z = p.state.size();
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    const Eigen::MatrixXd w1 = eigenfunction_field(pair, cfg.field_k, cfg.field_n_x, times[ti]);
    TableWriter w(out_path(cfg, "w1_t" + std::to_string(ti) + data_ext(cfg)), cfg.format,
                  {"x", "z", "w1"});
    w.comment("t = " + TableWriter::format_number(times[ti]) +
              ", gamma = " + TableWriter::format_number(pair.gamma.real()) + " + " +
              TableWriter::format_number(pair.gamma.imag()) + "i");
    for (int i = 0; i < cfg.field_n_x; ++i) {
      const double x = 2.0 * M_PI / cfg.field_k * static_cast<double>(i) / cfg.field_n_x;
      for (int j = 0; j < n_z; ++j) w.row({x, p.state.z[j], w1(i, j)});
    }
  }

  if (oscillatory) {
    // probe time series and phase orbit over two periods
    int jmax = 0;
    double amax = 0.0;
    for (int j = 0; j < n_z; ++j)
      if (std::abs(pair.W(j)) > amax) {
        amax = std::abs(pair.W(j));
        jmax = j;
      }
    const double period = 2.0 * M_PI / std::abs(pair.gamma.imag());
    TableWriter w(out_path(cfg, std::string("w1_series") + data_ext(cfg)), cfg.format,
                  {"t", "w1", "dw1_dt"});
    const int steps = 256;
    for (int s = 0; s <= steps; ++s) {
      const double t = 2.0 * period * s / steps;
      const std::complex<double> amp = pair.W(jmax) * std::exp(pair.gamma * t);
      w.row({t, amp.real(), (pair.gamma * amp).real()});
    }
  }
  return 0;
}

int cmd_compare_upswim(const RunConfig& cfg) {
  Pipeline p = solve_pipeline(cfg);
  const auto rows =
      compare_models(p.state, p.field, cfg.stability_options(), cfg.k_min, cfg.k_max, cfg.n_k);
  TableWriter w(out_path(cfg, std::string("compare_upswim") + data_ext(cfg)), cfg.format,
                {"k", "R_full", "branch_full", "R_upswim", "branch_upswim", "rel_diff"});
  for (const auto& r : rows) {
    if (!r.full_ok || !r.upswim_ok) {
      w.comment("no paired neutral point at k = " + TableWriter::format_number(r.k));
      continue;
    }
    w.row({r.k, r.R_full, branch_name(r.branch_full), r.R_upswim, branch_name(r.branch_upswim),
           r.rel_diff});
  }
  return 0;
}

}  // namespace photobio
