#include "photobio/tables.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace photobio {

SuspensionParams ReferenceRow::params() const {
  SuspensionParams p;
  p.schmidt = 20.0;
  p.swim_speed = V_c;
  p.extinction = kappa;
  p.albedo = omega;
  p.diffuse_mag = I_D;
  p.collimated_mag = 1.0;
  p.incidence_deg = theta_i;
  p.taxis = TaxisKind::GC13;
  return p;
}

std::vector<ReferenceRow> load_reference_tables(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open reference tables '" + path + "'");
  std::vector<ReferenceRow> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 12)
      throw std::runtime_error("reference tables: malformed line '" + line + "'");
    ReferenceRow r;
    r.table = std::stoi(cells[0]);
    r.row = std::stoi(cells[1]);
    r.V_c = std::stod(cells[2]);
    r.omega = std::stod(cells[3]);
    r.kappa = std::stod(cells[4]);
    r.I_D = std::stod(cells[5]);
    r.theta_i = std::stod(cells[6]);
    r.lambda_c = std::stod(cells[7]);
    r.R_c = std::stod(cells[8]);
    r.im_gamma = std::stod(cells[9]);
    r.mode = std::stoi(cells[10]);
    r.flag = cells[11];
    rows.push_back(r);
  }
  return rows;
}

std::vector<ReferenceRow> reference_table(const std::string& path, int table_id) {
  std::vector<ReferenceRow> out;
  for (const auto& r : load_reference_tables(path))
    if (r.table == table_id) out.push_back(r);
  if (out.empty())
    throw std::runtime_error("reference tables: no such table id " + std::to_string(table_id));
  return out;
}

}  // namespace photobio
