#pragma once

#include <string>
#include <vector>

#include "photobio/photomodel.hpp"

namespace photobio {

/// One reference critical solution from the published tables.
struct ReferenceRow {
  int table = 0;
  int row = 0;
  double V_c = 0.0, omega = 0.0, kappa = 0.0, I_D = 0.0, theta_i = 0.0;
  double lambda_c = 0.0, R_c = 0.0, im_gamma = 0.0;
  int mode = 0;
  std::string flag;  // none | osc_r1 | overstable

  SuspensionParams params() const;
};

std::vector<ReferenceRow> load_reference_tables(const std::string& path);
std::vector<ReferenceRow> reference_table(const std::string& path, int table_id);

}  // namespace photobio
