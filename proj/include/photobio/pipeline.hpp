#pragma once

#include <string>

#include "photobio/basicstate.hpp"
#include "photobio/config.hpp"
#include "photobio/stability.hpp"

namespace photobio {

/// Radiation field + equilibrium column for one configuration.
struct Pipeline {
  double theta0 = 0.0;
  RadiationField field;
  BasicState state;
};

Pipeline solve_pipeline(const RunConfig& cfg);

// verbose = one progress line per wavenumber family on stderr
int cmd_basic_state(const RunConfig& cfg);
int cmd_uniform_intensity(const RunConfig& cfg);
int cmd_neutral_curve(const RunConfig& cfg);
int cmd_critical(const RunConfig& cfg);
int cmd_reproduce_table(const RunConfig& cfg, const std::string& tables_path);
int cmd_mode_field(const RunConfig& cfg);
int cmd_compare_upswim(const RunConfig& cfg);

}  // namespace photobio
