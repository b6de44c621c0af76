// Command-line driver for the phototactic bioconvection solver.
//
// Exit codes: 0 success, 2 configuration error, 3 solver failure.

#include <CLI11.hpp>
#include <iostream>

#include "photobio/pipeline.hpp"

#ifndef PHOTOBIO_TABLES_FILE
#define PHOTOBIO_TABLES_FILE "data/paper_tables.csv"
#endif

int main(int argc, char** argv) {
  CLI::App app{"Phototactic bioconvection: equilibrium state and onset of instability"};
  app.require_subcommand(1);

  std::string config_path, out_dir, format, tables_path = PHOTOBIO_TABLES_FILE;
  int threads = 0;
  app.add_option("--config", config_path, "configuration file (key = value sections)");
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--format", format, "csv or ndjson (overrides config)")
      ->check(CLI::IsMember({"csv", "ndjson"}));
  app.add_option("--threads", threads, "worker threads for wavenumber sweeps");
  app.add_option("--tables", tables_path, "reference tables file");

  auto* c_basic = app.add_subcommand("basic-state", "equilibrium concentration column");
  auto* c_uniform =
      app.add_subcommand("uniform-intensity", "total intensity across a uniform suspension");
  auto* c_curve = app.add_subcommand("neutral-curve", "trace the neutral curve in (k, R)");
  auto* c_crit = app.add_subcommand("critical", "most unstable solution over the sweep");
  auto* c_table = app.add_subcommand("reproduce-table", "recompute a published table");
  int table_id = 0;
  c_table->add_option("--table", table_id, "table id (2, 3 or 4)");
  auto* c_field = app.add_subcommand("mode-field", "eigenmode flow field export");
  double field_k = 0.0, field_R = 0.0;
  c_field->add_option("--k", field_k, "wavenumber");
  c_field->add_option("--R", field_R, "Rayleigh number");
  auto* c_cmp = app.add_subcommand("compare-upswim", "scattering vs up-swimming neutral curves");

  CLI11_PARSE(app, argc, argv);

  photobio::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = photobio::load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (format == "csv") cfg.format = photobio::OutputFormat::Csv;
    if (format == "ndjson") cfg.format = photobio::OutputFormat::Ndjson;
    if (threads > 0) cfg.threads = threads;
    if (table_id > 0) cfg.table_id = table_id;
    if (field_k > 0.0) cfg.field_k = field_k;
    if (field_R > 0.0) cfg.field_R = field_R;
    cfg.suspension.validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (c_basic->parsed()) return photobio::cmd_basic_state(cfg);
    if (c_uniform->parsed()) return photobio::cmd_uniform_intensity(cfg);
    if (c_curve->parsed()) return photobio::cmd_neutral_curve(cfg);
    if (c_crit->parsed()) return photobio::cmd_critical(cfg);
    if (c_table->parsed()) return photobio::cmd_reproduce_table(cfg, tables_path);
    if (c_field->parsed()) return photobio::cmd_mode_field(cfg);
    if (c_cmp->parsed()) return photobio::cmd_compare_upswim(cfg);
  } catch (const photobio::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
