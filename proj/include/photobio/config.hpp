#pragma once

#include <string>
#include <vector>

#include "photobio/photomodel.hpp"
#include "photobio/stability.hpp"

namespace photobio {

enum class OutputFormat { Csv, Ndjson };

/// Full run configuration.  Flat `key = value` text grouped by `[section]`
/// headers; every field has a default and unknown keys are rejected by name.
struct RunConfig {
  SuspensionParams suspension;
  bool taxis_off = false;

  // solver block
  int n_tau = 201;
  int n_z = 151;
  int n_mu_basic = 32;
  AngularOptions ang;  // perturbed-field rule
  double r_min = 1.0, r_max = 5000.0;
  int r_panels = 12;
  double k_min = 0.3, k_max = 10.0;
  int n_k = 40;
  double neutral_tol = 1e-6;
  double source_tol = 1e-9;
  double golden_tol = 1e-4;
  int threads = 1;

  // output block
  std::string out_dir = "out";
  OutputFormat format = OutputFormat::Csv;

  // mode_field block
  double field_k = 0.0;
  double field_R = 0.0;
  int field_n_x = 64;
  int field_frames = 6;
  std::vector<double> field_times;  // explicit sample times (optional)

  // table block
  int table_id = 2;
  std::vector<int> table_rows;  // 1-based subset; empty = all

  StabilityOptions stability_options() const;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parse a config file; diagnostics carry line numbers and the offending key.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");

}  // namespace photobio
