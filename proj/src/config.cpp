#include "photobio/config.hpp"

#include <fstream>
#include <sstream>

namespace photobio {

StabilityOptions RunConfig::stability_options() const {
  StabilityOptions o;
  o.n_z = n_z;
  o.ang = ang;
  o.r_min = r_min;
  o.r_max = r_max;
  o.r_panels = r_panels;
  o.neutral_tol = neutral_tol;
  o.threads = threads;
  o.golden_tol = golden_tol;
  return o;
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, const std::string& origin, int line,
                 const std::string& key) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    fail(origin, line, "bad numeric value '" + v + "' for key '" + key + "'");
  }
}

int to_int(const std::string& v, const std::string& origin, int line, const std::string& key) {
  const double x = to_double(v, origin, line, key);
  const int i = static_cast<int>(x);
  if (x != i) fail(origin, line, "expected integer for key '" + key + "'");
  return i;
}

bool to_bool(const std::string& v, const std::string& origin, int line,
             const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(origin, line, "expected boolean for key '" + key + "'");
}

std::vector<double> to_list(const std::string& v, const std::string& origin, int line,
                            const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(item, origin, line, key));
  }
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section = "suspension";
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(origin, lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "suspension" && section != "solver" && section != "output" &&
          section != "mode_field" && section != "table" && section != "compare")
        fail(origin, lineno, "unknown section '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(origin, lineno, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) fail(origin, lineno, "expected key = value");

    auto D = [&] { return to_double(val, origin, lineno, key); };
    auto I = [&] { return to_int(val, origin, lineno, key); };
    auto B = [&] { return to_bool(val, origin, lineno, key); };

    if (section == "suspension") {
      if (key == "schmidt") cfg.suspension.schmidt = D();
      else if (key == "swim_speed") cfg.suspension.swim_speed = D();
      else if (key == "extinction") cfg.suspension.extinction = D();
      else if (key == "albedo") cfg.suspension.albedo = D();
      else if (key == "diffuse") cfg.suspension.diffuse_mag = D();
      else if (key == "collimated") cfg.suspension.collimated_mag = D();
      else if (key == "incidence_deg") cfg.suspension.incidence_deg = D();
      else if (key == "refractive_index") cfg.suspension.refractive_index = D();
      else if (key == "taxis") {
        if (val == "gc13") cfg.suspension.taxis = TaxisKind::GC13;
        else if (val == "gc19") cfg.suspension.taxis = TaxisKind::GC19;
        else fail(origin, lineno, "taxis must be gc13 or gc19");
      } else if (key == "taxis_off") cfg.taxis_off = B();
      else if (key == "top_bc") {
        if (val == "rigid") cfg.suspension.top_bc = TopBC::Rigid;
        else if (val == "stress_free") cfg.suspension.top_bc = TopBC::StressFree;
        else fail(origin, lineno, "top_bc must be rigid or stress_free");
      } else fail(origin, lineno, "unknown key '" + key + "' in [suspension]");
    } else if (section == "solver") {
      if (key == "n_tau") cfg.n_tau = I();
      else if (key == "n_z") cfg.n_z = I();
      else if (key == "n_mu_basic") cfg.n_mu_basic = I();
      else if (key == "n_mu") cfg.ang.n_mu = I();
      else if (key == "n_phi") cfg.ang.n_phi = I();
      else if (key == "r_min") cfg.r_min = D();
      else if (key == "r_max") cfg.r_max = D();
      else if (key == "r_panels") cfg.r_panels = I();
      else if (key == "k_min") cfg.k_min = D();
      else if (key == "k_max") cfg.k_max = D();
      else if (key == "n_k") cfg.n_k = I();
      else if (key == "neutral_tol") cfg.neutral_tol = D();
      else if (key == "source_tol") cfg.source_tol = D();
      else if (key == "golden_tol") cfg.golden_tol = D();
      else if (key == "threads") cfg.threads = I();
      else fail(origin, lineno, "unknown key '" + key + "' in [solver]");
    } else if (section == "output") {
      if (key == "dir") cfg.out_dir = val;
      else if (key == "format") {
        if (val == "csv") cfg.format = OutputFormat::Csv;
        else if (val == "ndjson") cfg.format = OutputFormat::Ndjson;
        else fail(origin, lineno, "format must be csv or ndjson");
      } else fail(origin, lineno, "unknown key '" + key + "' in [output]");
    } else if (section == "mode_field") {
      if (key == "k") cfg.field_k = D();
      else if (key == "R") cfg.field_R = D();
      else if (key == "n_x") cfg.field_n_x = I();
      else if (key == "frames") cfg.field_frames = I();
      else if (key == "times") cfg.field_times = to_list(val, origin, lineno, key);
      else fail(origin, lineno, "unknown key '" + key + "' in [mode_field]");
    } else if (section == "table") {
      if (key == "id") cfg.table_id = I();
      else if (key == "rows") {
        for (double r : to_list(val, origin, lineno, key))
          cfg.table_rows.push_back(static_cast<int>(r));
      } else fail(origin, lineno, "unknown key '" + key + "' in [table]");
    } else if (section == "compare") {
      fail(origin, lineno, "unknown key '" + key + "' in [compare]");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace photobio
