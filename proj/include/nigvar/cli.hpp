// Copyright 2026 The nigvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nigvar/data_ingest.hpp"
#include "nigvar/error.hpp"
#include "nigvar/estimation.hpp"
#include "nigvar/simulation.hpp"
#include "nigvar/variation.hpp"
#include "nigvar/version.hpp"

namespace nigvar {

enum class Command { fit, variation, simulate, floor };

inline std::string_view to_string(Command c) {
  switch (c) {
    case Command::fit: return "fit";
    case Command::variation: return "variation";
    case Command::simulate: return "simulate";
    case Command::floor: return "floor";
  }
  return "?";
}

inline Command parse_command(std::string_view s) {
  if (s == "fit") return Command::fit;
  if (s == "variation") return Command::variation;
  if (s == "simulate") return Command::simulate;
  if (s == "floor") return Command::floor;
  throw DomainError("unknown command '" + std::string(s) + "' (expected fit, variation, simulate or floor)");
}

/// Error tagged with the pipeline stage that raised it.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what) : Error(what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Every setting of a run. Serialized in full into the run manifest.
struct RunConfig {
  Command command = Command::variation;
  Model model = Model::normal;
  std::string input_path;
  /// Prefix of every output file.
  std::string output_path;
  std::size_t window_length = 252;
  int annualization_days = 365;
  double percent_scale = 100.0;
  SigmaInput sigma_input = SigmaInput::level;
  std::uint64_t seed = 0;
  NcigBondAlpha eq20_variant = NcigBondAlpha::verbatim;
  FitFailurePolicy fit_failure_policy = FitFailurePolicy::abort;
  BondReturns bond_returns = BondReturns::log_change;
  std::size_t ecf_grid_size = 64;
  double ecf_grid_max = 20.0;
  int restarts = 5;
  double display_multiplier = 1.0;
  // simulate / floor
  std::string scenario = "custom";  // or "paper_mimic"
  std::size_t n_days = 600;
  VolSeriesMode vol_series_mode = VolSeriesMode::constant;
  /// Empty selects the model's default law.
  std::string stock_law;
  std::string bond_law;
  std::size_t replications = 200;
  double percentile = 0.99;
  ColumnMapping columns{};
};

// ---------------------------------------------------------------------------
// Text helpers
// ---------------------------------------------------------------------------

/// Shortest decimal text that parses back to exactly `v`.
inline std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
    throw DomainError(std::string(what) + ": invalid number '" + std::string(s) + "'");
  return v;
}

template <class Int>
Int parse_integer(std::string_view s, std::string_view what) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw DomainError(std::string(what) + ": invalid integer '" + std::string(s) + "'");
  return v;
}

/// "nig:mu,alpha,beta,delta" or "ncig:mu,alpha,beta,delta".
inline std::string format_law(const ReturnLaw& law) {
  return std::visit(
      [](const auto& p) {
        const bool nig = std::is_same_v<std::decay_t<decltype(p)>, NIGParams>;
        return std::string(nig ? "nig:" : "ncig:") + format_double(p.mu()) + ',' + format_double(p.alpha()) + ',' +
               format_double(p.beta()) + ',' + format_double(p.delta());
      },
      law);
}

inline ReturnLaw parse_law(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw DomainError("law '" + std::string(text) + "' lacks a family prefix");
  const std::string_view family = text.substr(0, colon);
  std::array<double, 4> v{};
  std::string_view rest = text.substr(colon + 1);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto comma = rest.find(',');
    if ((comma == std::string_view::npos) != (i == 3))
      throw DomainError("law '" + std::string(text) + "' needs exactly four parameters");
    v[i] = parse_double(rest.substr(0, comma), "law parameter");
    if (comma != std::string_view::npos) rest.remove_prefix(comma + 1);
  }
  if (family == "nig") return NIGParams(v[0], v[1], v[2], v[3]);
  if (family == "ncig") return NCIGParams(v[0], v[1], v[2], v[3]);
  throw DomainError("unknown law family '" + std::string(family) + "'");
}

inline ReturnLaw default_stock_law(Model m) {
  if (m == Model::ncig) return NCIGParams(0.0, 2.0, 1.0, 0.5);
  return NIGParams(0.0, 2.0, 0.0, 1.0);
}

inline ReturnLaw default_bond_law(Model m) {
  if (m == Model::ncig) return NCIGParams(0.0, 3.0, 1.0, 0.3);
  return NIGParams(0.0, 3.0, 0.0, 0.5);
}

/// 64-bit FNV-1a of a byte string, as 16 lowercase hex digits.
inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

namespace detail {

struct ManifestField {
  std::string_view key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

inline std::string delimiter_name(char d) {
  if (d == '\t') return "tab";
  return std::string(1, d);
}

inline char parse_delimiter(std::string_view s) {
  if (s == "tab" || s == "\\t") return '\t';
  if (s.size() != 1) throw DomainError("delimiter must be a single character or 'tab'");
  return s[0];
}

inline const std::vector<ManifestField>& manifest_fields() {
  using C = RunConfig;
  using S = std::string_view;
  auto str = [](auto member) {
    return ManifestField{"", [member](const C& c) { return c.*member; },
                         [member](C& c, S v) { c.*member = std::string(v); }};
  };
  auto size = [](auto member) {
    return ManifestField{"", [member](const C& c) { return std::to_string(c.*member); },
                         [member](C& c, S v) { c.*member = parse_integer<std::size_t>(v, "manifest"); }};
  };
  auto real = [](auto member) {
    return ManifestField{"", [member](const C& c) { return format_double(c.*member); },
                         [member](C& c, S v) { c.*member = parse_double(v, "manifest"); }};
  };
  auto named = [](ManifestField f, S key) {
    f.key = key;
    return f;
  };
  static const std::vector<ManifestField> fields = {
      {"command", [](const C& c) { return std::string(to_string(c.command)); },
       [](C& c, S v) { c.command = parse_command(v); }},
      {"model", [](const C& c) { return std::string(to_string(c.model)); },
       [](C& c, S v) { c.model = parse_model(v); }},
      named(str(&C::input_path), "input_path"),
      named(str(&C::output_path), "output_path"),
      named(size(&C::window_length), "window_length"),
      {"annualization_days", [](const C& c) { return std::to_string(c.annualization_days); },
       [](C& c, S v) { c.annualization_days = parse_integer<int>(v, "manifest"); }},
      named(real(&C::percent_scale), "percent_scale"),
      {"sigma_input", [](const C& c) { return std::string(to_string(c.sigma_input)); },
       [](C& c, S v) { c.sigma_input = parse_sigma_input(v); }},
      {"seed", [](const C& c) { return std::to_string(c.seed); },
       [](C& c, S v) { c.seed = parse_integer<std::uint64_t>(v, "manifest"); }},
      {"eq20_variant", [](const C& c) { return std::string(to_string(c.eq20_variant)); },
       [](C& c, S v) { c.eq20_variant = parse_ncig_bond_alpha(v); }},
      {"fit_failure_policy", [](const C& c) { return std::string(to_string(c.fit_failure_policy)); },
       [](C& c, S v) { c.fit_failure_policy = parse_fit_failure_policy(v); }},
      {"bond_returns", [](const C& c) { return std::string(to_string(c.bond_returns)); },
       [](C& c, S v) { c.bond_returns = parse_bond_returns(v); }},
      named(size(&C::ecf_grid_size), "ecf_grid_size"),
      named(real(&C::ecf_grid_max), "ecf_grid_max"),
      {"restarts", [](const C& c) { return std::to_string(c.restarts); },
       [](C& c, S v) { c.restarts = parse_integer<int>(v, "manifest"); }},
      named(real(&C::display_multiplier), "display_multiplier"),
      named(str(&C::scenario), "scenario"),
      named(size(&C::n_days), "n_days"),
      {"vol_series_mode", [](const C& c) { return std::string(to_string(c.vol_series_mode)); },
       [](C& c, S v) { c.vol_series_mode = parse_vol_series_mode(v); }},
      named(str(&C::stock_law), "stock_law"),
      named(str(&C::bond_law), "bond_law"),
      named(size(&C::replications), "replications"),
      named(real(&C::percentile), "percentile"),
      {"column_date", [](const C& c) { return c.columns.date; }, [](C& c, S v) { c.columns.date = v; }},
      {"column_spx", [](const C& c) { return c.columns.spx; }, [](C& c, S v) { c.columns.spx = v; }},
      {"column_vix", [](const C& c) { return c.columns.vix; }, [](C& c, S v) { c.columns.vix = v; }},
      {"column_yield10", [](const C& c) { return c.columns.yield10; }, [](C& c, S v) { c.columns.yield10 = v; }},
      {"column_tyvix", [](const C& c) { return c.columns.tyvix; }, [](C& c, S v) { c.columns.tyvix = v; }},
      {"delimiter", [](const C& c) { return delimiter_name(c.columns.delimiter); },
       [](C& c, S v) { c.columns.delimiter = parse_delimiter(v); }},
  };
  return fields;
}

}  // namespace detail

/// Checks the invariants of a configuration for its command.
inline void validate(const RunConfig& c) {
  auto fail = [](const std::string& m) { throw StageError("config", m); };
  if (c.window_length < kMinFitLength)
    fail("window length must be at least " + std::to_string(kMinFitLength));
  if (c.output_path.empty()) fail("an output path is required");
  if ((c.command == Command::fit || c.command == Command::variation) && c.input_path.empty())
    fail("an input path is required for the " + std::string(to_string(c.command)) + " command");
  if (c.annualization_days <= 0) fail("annualization days must be positive");
  if (!(c.percent_scale > 0.0)) fail("percent scale must be positive");
  if (c.ecf_grid_size < 1) fail("ECF grid size must be positive");
  if (!(c.ecf_grid_max > 0.1)) fail("ECF grid maximum must exceed the grid minimum 0.1");
  if (c.restarts < 0) fail("restarts must be non-negative");
  if (!std::isfinite(c.display_multiplier)) fail("display multiplier must be finite");
  if (c.scenario != "custom" && c.scenario != "paper_mimic") fail("scenario must be custom or paper_mimic");
  if (c.n_days < 2) fail("n_days must be at least 2");
  if (!(c.percentile > 0.0 && c.percentile <= 1.0)) fail("percentile must lie in (0, 1]");
  if (c.command == Command::fit && c.model == Model::normal) fail("the fit command needs model nig or ncig");
  if (c.command == Command::floor) {
    if (c.model == Model::normal) fail("the floor command needs model nig or ncig");
    if (c.replications < 100) fail("the floor command needs at least 100 replications");
  }
}

/// Key-value text recording every config field, the input hash and the
/// library version.
inline std::string manifest_text(const RunConfig& c, const std::string& input_hash) {
  std::string out = "# nigvar run manifest\n";
  out += "version=" + std::string(kVersion) + '\n';
  for (const auto& f : detail::manifest_fields()) out += std::string(f.key) + '=' + f.get(c) + '\n';
  out += "input_hash=" + input_hash + '\n';
  return out;
}

struct Manifest {
  RunConfig config;
  std::string input_hash;
  std::string version;
};

inline Manifest parse_manifest(std::istream& in) {
  Manifest m;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw StageError("config", "manifest line " + std::to_string(line_no) + " is not key=value");
    const std::string_view key(line.data(), eq);
    const std::string_view value(line.data() + eq + 1, line.size() - eq - 1);
    if (key == "version") {
      m.version = value;
      continue;
    }
    if (key == "input_hash") {
      m.input_hash = value;
      continue;
    }
    const auto& fields = detail::manifest_fields();
    const auto it = std::find_if(fields.begin(), fields.end(), [&](const auto& f) { return f.key == key; });
    if (it == fields.end())
      throw StageError("config", "manifest line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    try {
      it->set(m.config, value);
    } catch (const Error& e) {
      throw StageError("config", "manifest line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return m;
}

inline Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StageError("config", "cannot open manifest '" + path.string() + "'");
  return parse_manifest(in);
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct CommandOutput {
  std::vector<std::filesystem::path> files;
  /// One-line human summary for the terminal.
  std::string summary;
  /// Non-fatal diagnostics.
  std::vector<std::string> warnings;
};

namespace detail {

inline std::filesystem::path output_file(const RunConfig& c, std::string_view suffix) {
  return c.output_path + std::string(suffix);
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) throw StageError("output", "failed to write '" + path.string() + "'");
  // Read back to confirm the bytes landed intact.
  if (read_file(path) != text) throw StageError("output", "verification of '" + path.string() + "' failed");
}

inline PipelineOptions pipeline_options(const RunConfig& c) {
  PipelineOptions o;
  o.window_length = c.window_length;
  o.gamma = GammaOptions{c.annualization_days, c.percent_scale, c.sigma_input};
  o.ncig_bond_alpha = c.eq20_variant;
  o.fit_failure_policy = c.fit_failure_policy;
  o.bond_returns = c.bond_returns;
  o.ecf_grid_size = c.ecf_grid_size;
  o.ecf_grid_max = c.ecf_grid_max;
  o.seed = c.seed;
  o.restarts = c.restarts;
  return o;
}

inline ReturnLaw stock_law(const RunConfig& c) {
  return c.stock_law.empty() ? default_stock_law(c.model) : parse_law(c.stock_law);
}

inline ReturnLaw bond_law(const RunConfig& c) {
  return c.bond_law.empty() ? default_bond_law(c.model) : parse_law(c.bond_law);
}

struct LoadedInput {
  MarketQuadruple data;
  std::string hash;
};

inline LoadedInput load_input(const RunConfig& c, CommandOutput& out) {
  try {
    const std::string bytes = read_file(c.input_path);
    std::istringstream in(bytes);
    LoadedQuadruple loaded = parse_quadruple(in, c.columns);
    if (loaded.report.rows_dropped > 0)
      out.warnings.push_back("dropped " + std::to_string(loaded.report.rows_dropped) + " of " +
                             std::to_string(loaded.report.rows_read) + " rows with missing fields");
    const std::size_t needed = 2 * c.window_length;
    if (loaded.data.size() < needed) {
      const std::string msg = std::to_string(loaded.data.size()) + " usable rows, fewer than 2 x window length = " +
                              std::to_string(needed);
      if (c.model != Model::normal) throw StageError("ingest", msg + " required by the " +
                                                                   std::string(to_string(c.model)) + " model");
      out.warnings.push_back(msg);
    }
    return {std::move(loaded.data), "fnv1a64:" + fnv1a_hex(bytes)};
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError("ingest", e.what());
  }
}

inline std::string fits_csv(const PipelineResult& r) {
  std::string text = "asset,window,end_date,mu,alpha,beta,delta,objective,converged,iterations,carried_forward\n";
  for (const auto* fits : {&r.stock_fits, &r.bond_fits}) {
    const char* asset = fits == &r.stock_fits ? "stock" : "bond";
    for (const auto& f : *fits) {
      text += std::string(asset) + ',' + std::to_string(f.window) + ',' + f.end_date.to_string();
      for (double p : f.params) text += ',' + format_double(p);
      text += ',' + format_double(f.objective) + ',' + (f.converged ? "1" : "0") + ',' +
              std::to_string(f.iterations) + ',' + (f.carried_forward ? "1" : "0") + '\n';
    }
  }
  return text;
}

// Runs the pipeline, attributing failures to the fit or variation stage.
inline PipelineResult run_stage_pipeline(const RunConfig& c, const MarketQuadruple& data) {
  try {
    return run_pipeline(c.model, data, pipeline_options(c));
  } catch (const FitError& e) {
    throw StageError("fit", e.what());
  } catch (const Error& e) {
    throw StageError("variation", e.what());
  }
}

}  // namespace detail

/// Per-window parameter table for both assets.
inline CommandOutput cmd_fit(const RunConfig& c) {
  validate(c);
  CommandOutput out;
  const auto input = detail::load_input(c, out);
  const PipelineResult r = detail::run_stage_pipeline(c, input.data);
  const auto fits = detail::output_file(c, "_fits.csv");
  const auto manifest = detail::output_file(c, "_manifest.txt");
  detail::write_text(fits, detail::fits_csv(r));
  detail::write_text(manifest, manifest_text(c, input.hash));
  out.files = {fits, manifest};
  out.summary = std::to_string(r.stock_fits.size()) + " windows fitted per asset";
  return out;
}

/// Forecast-difference series and its rolling variance.
inline CommandOutput cmd_variation(const RunConfig& c) {
  validate(c);
  CommandOutput out;
  const auto input = detail::load_input(c, out);
  const PipelineResult r = detail::run_stage_pipeline(c, input.data);

  std::string chi = "date,chi\n";
  for (std::size_t t = 0; t < r.chi.size(); ++t)
    chi += r.chi.dates[t].to_string() + ',' + format_double(r.chi.values[t]) + '\n';
  std::string variation = "window_start_date,window_end_date,value,display_value\n";
  const std::size_t T = r.variation.window_length;
  for (std::size_t s = 0; s < r.variation.size(); ++s) {
    const std::size_t first = r.variation.start_offsets[s];
    const double v = r.variation.values[s];
    variation += r.chi.dates[first].to_string() + ',' + r.chi.dates[first + T - 1].to_string() + ',' +
                 format_double(v) + ',' + format_double(v * c.display_multiplier) + '\n';
  }
  out.files = {detail::output_file(c, "_chi.csv"), detail::output_file(c, "_variation.csv")};
  detail::write_text(out.files[0], chi);
  detail::write_text(out.files[1], variation);
  if (c.model != Model::normal) {
    out.files.push_back(detail::output_file(c, "_fits.csv"));
    detail::write_text(out.files.back(), detail::fits_csv(r));
  }
  out.files.push_back(detail::output_file(c, "_manifest.txt"));
  detail::write_text(out.files.back(), manifest_text(c, input.hash));
  const auto [lo, hi] = std::minmax_element(r.variation.values.begin(), r.variation.values.end());
  out.summary = std::to_string(r.variation.size()) + " variation values in [" + format_double(*lo) + ", " +
                format_double(*hi) + "]";
  return out;
}

/// Synthetic quadruple in the ingest format.
inline CommandOutput cmd_simulate(const RunConfig& c) {
  validate(c);
  CommandOutput out;
  MarketQuadruple data;
  try {
    SyntheticScenario s;
    if (c.scenario == "paper_mimic") {
      s = paper_mimic_scenario(c.seed);
    } else {
      s.stock_law = detail::stock_law(c);
      s.bond_law = detail::bond_law(c);
      s.n_days = c.n_days;
      s.seed = c.seed;
      s.vol_series_mode = c.vol_series_mode;
      s.annualization_days = c.annualization_days;
      s.percent_scale = c.percent_scale;
    }
    data = generate_scenario(s);
  } catch (const Error& e) {
    throw StageError("simulate", e.what());
  }
  std::ostringstream csv;
  write_quadruple(csv, data, c.columns);
  const auto path = detail::output_file(c, "_data.csv");
  detail::write_text(path, csv.str());
  try {
    if (!(load_quadruple(path, c.columns).data == data))
      throw StageError("output", "generated file does not round-trip");
  } catch (const DataError& e) {
    throw StageError("output", std::string("generated file fails validation: ") + e.what());
  }
  out.files = {path, detail::output_file(c, "_manifest.txt")};
  detail::write_text(out.files[1], manifest_text(c, "none"));
  out.summary = std::to_string(data.size()) + " days generated";
  return out;
}

/// Monte Carlo sampling floor of the variation statistic under constant laws.
inline CommandOutput cmd_floor(const RunConfig& c) {
  validate(c);
  CommandOutput out;
  FloorResult floor;
  try {
    const ReturnLaw stock = detail::stock_law(c);
    const ReturnLaw bond = detail::bond_law(c);
    if (model_for_laws(stock, bond) != c.model)
      throw DomainError("law family does not match model " + std::string(to_string(c.model)));
    FloorOptions o;
    o.window_length = c.window_length;
    o.replications = c.replications;
    o.seed = c.seed;
    o.n_days = c.n_days;
    o.percentile = c.percentile;
    o.pipeline = detail::pipeline_options(c);
    floor = sampling_floor(stock, bond, o);
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError("floor", e.what());
  }
  std::string reps = "replication,seed,max_variation\n";
  for (std::size_t r = 0; r < floor.replicate_max.size(); ++r)
    reps += std::to_string(r) + ',' + std::to_string(c.seed + r) + ',' + format_double(floor.replicate_max[r]) + '\n';
  const std::string summary = "model,replications,percentile,floor\n" + std::string(to_string(floor.model)) + ',' +
                              std::to_string(c.replications) + ',' + format_double(c.percentile) + ',' +
                              format_double(floor.floor) + '\n';
  out.files = {detail::output_file(c, "_floor_replications.csv"), detail::output_file(c, "_floor.csv"),
               detail::output_file(c, "_manifest.txt")};
  detail::write_text(out.files[0], reps);
  detail::write_text(out.files[1], summary);
  detail::write_text(out.files[2], manifest_text(c, "none"));
  out.summary = "sampling floor " + format_double(floor.floor);
  return out;
}

inline CommandOutput run_command(const RunConfig& c) {
  switch (c.command) {
    case Command::fit: return cmd_fit(c);
    case Command::variation: return cmd_variation(c);
    case Command::simulate: return cmd_simulate(c);
    case Command::floor: return cmd_floor(c);
  }
  throw StageError("config", "unknown command");
}

/// Re-runs the configuration recorded in a manifest after checking that the
/// input file is unchanged.
inline CommandOutput rerun_manifest(const std::filesystem::path& manifest_path) {
  const Manifest m = load_manifest(manifest_path);
  if (m.version != kVersion)
    throw StageError("config", "manifest written by version " + m.version + ", this is " + std::string(kVersion));
  if (m.config.command == Command::fit || m.config.command == Command::variation) {
    std::string bytes;
    try {
      bytes = read_file(m.config.input_path);
    } catch (const Error& e) {
      throw StageError("ingest", e.what());
    }
    if ("fnv1a64:" + fnv1a_hex(bytes) != m.input_hash)
      throw StageError("ingest", "input '" + m.config.input_path + "' changed since the manifest was written");
  }
  return run_command(m.config);
}

}  // namespace nigvar
