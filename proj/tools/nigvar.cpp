// Copyright 2026 The nigvar Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: fit, variation, simulate and floor runs, each
// accompanied by a manifest from which it can be re-run exactly.

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "nigvar/nigvar.hpp"

namespace {

template <class Enum, class Parse>
void enum_option(CLI::App& app, const std::string& name, Enum& target, Parse parse, const std::string& help) {
  app.add_option_function<std::string>(
         name, [&target, parse](const std::string& v) { target = parse(v); }, help)
      ->check([parse](const std::string& v) {
        try {
          parse(v);
          return std::string();
        } catch (const nigvar::Error& e) {
          return std::string(e.what());
        }
      });
}

}  // namespace

int main(int argc, char** argv) {
  using namespace nigvar;
  CLI::App app{"Excess-return variation under normal, NIG and NCIG return laws"};
  app.set_version_flag("--version", std::string(kVersion));

  RunConfig c;
  std::string manifest;
  std::string delimiter = ",";

  app.add_option("--manifest", manifest, "Re-run the configuration recorded in this manifest");
  enum_option(app, "--command", c.command, parse_command, "fit | variation | simulate | floor");
  enum_option(app, "--model", c.model, parse_model, "normal | nig | ncig (default normal)");
  app.add_option("--input", c.input_path, "Input CSV (fit, variation)");
  app.add_option("--output", c.output_path, "Output path prefix");
  app.add_option("--window", c.window_length, "Rolling window length T (default 252)");
  app.add_option("--annualization-days", c.annualization_days, "Days per year in the normal model (default 365)");
  app.add_option("--percent-scale", c.percent_scale, "Divisor turning vol quotes into fractions (default 100)");
  enum_option(app, "--sigma-input", c.sigma_input, parse_sigma_input,
              "level | cumulative: what the normal model takes as sigma (default level)");
  app.add_option("--seed", c.seed, "Seed for data generation and optimizer restarts (default 0)");
  enum_option(app, "--eq20-variant", c.eq20_variant, parse_ncig_bond_alpha,
              "verbatim | corrected: alpha inside the NCIG bond term (the stock's alpha, or the bond's "
              "own; default verbatim)");
  enum_option(app, "--fit-failure-policy", c.fit_failure_policy, parse_fit_failure_policy,
              "abort | carry_forward (default abort)");
  enum_option(app, "--bond-returns", c.bond_returns, parse_bond_returns,
              "log_change | difference of the 10-year yield (default log_change)");
  app.add_option("--ecf-grid-size", c.ecf_grid_size, "NCIG ECF grid points (default 64)");
  app.add_option("--ecf-grid-max", c.ecf_grid_max, "NCIG ECF grid upper end in units of 1/sd (default 20)");
  app.add_option("--restarts", c.restarts, "Jittered restarts of a cold fit (default 5)");
  app.add_option("--display-multiplier", c.display_multiplier,
                 "Factor applied to the display_value column of variation output (default 1)");
  app.add_option("--scenario", c.scenario, "simulate: custom | paper_mimic (default custom)");
  app.add_option("--n-days", c.n_days, "simulate/floor: days per synthetic series (default 600)");
  enum_option(app, "--vol-mode", c.vol_series_mode, parse_vol_series_mode,
              "simulate: constant | from_law | paper_mimic (default constant)");
  app.add_option("--stock-law", c.stock_law, "simulate/floor: stock law, e.g. nig:0,2,0,1");
  app.add_option("--bond-law", c.bond_law, "simulate/floor: bond law, e.g. nig:0,3,0,0.5");
  app.add_option("--replications", c.replications, "floor: Monte Carlo replications (default 200)");
  app.add_option("--percentile", c.percentile, "floor: quantile of the per-replication maxima (default 0.99)");
  app.add_option("--col-date", c.columns.date, "Date column header (default date)");
  app.add_option("--col-spx", c.columns.spx, "Equity index column header (default spx_close)");
  app.add_option("--col-vix", c.columns.vix, "Equity implied-vol column header (default vix_close)");
  app.add_option("--col-yield", c.columns.yield10, "10-year yield column header (default ust10y_yield)");
  app.add_option("--col-tyvix", c.columns.tyvix, "Treasury implied-vol column header (default tyvix_close)");
  app.add_option("--delimiter", delimiter, "Field delimiter: one character or 'tab' (default ,)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  std::string stage = "config";
  try {
    CommandOutput out;
    if (!manifest.empty()) {
      if (app.count("--command") || app.count("--input") || app.count("--output"))
        throw StageError("config", "--manifest cannot be combined with other run options");
      out = rerun_manifest(manifest);
    } else {
      if (!app.count("--command")) throw StageError("config", "--command is required");
      c.columns.delimiter = detail::parse_delimiter(delimiter);
      out = run_command(c);
    }
    for (const auto& w : out.warnings) std::cerr << "nigvar: warning: " << w << '\n';
    std::cout << out.summary << '\n';
    for (const auto& f : out.files) std::cout << "wrote " << f.string() << '\n';
    return 0;
  } catch (const StageError& e) {
    stage = e.stage();
    std::cerr << "nigvar: error [" << stage << "]: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "nigvar: error [" << stage << "]: " << e.what() << '\n';
  }
  return 1;
}
