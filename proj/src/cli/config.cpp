#include <fstream>
#include <sstream>

#include "phc/cli.hpp"
#include "phc/error.hpp"
#include "phc/layout_io.hpp"

namespace phc::cli {

namespace {

namespace fs = std::filesystem;

CommonConfig parse_common(const Json& j, const fs::path& base_dir, std::string_view ctx) {
  const int version = get_required<int>(j, "schema_version", ctx);
  if (version != kConfigSchemaVersion) {
    throw ConfigError(std::string(ctx) + ": field 'schema_version' must be " + std::to_string(kConfigSchemaVersion));
  }
  CommonConfig c;
  c.base_dir = base_dir;
  if (j.contains("out")) c.out = (base_dir / get_required<std::string>(j, "out", ctx)).string();
  c.seed = get_or<std::uint64_t>(j, "seed", 0, ctx);
  return c;
}

fs::path resolve(const fs::path& base_dir, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base_dir / path;
}

template <typename T>
void positive(T value, std::string_view ctx, std::string_view key) {
  if (!(value > 0)) throw ConfigError(std::string(ctx) + ": field '" + std::string(key) + "' must be positive");
}

LayoutSource parse_source(const Json& j, const fs::path& base_dir, std::string_view ctx) {
  const bool has_layout = j.contains("layout");
  const bool has_geometry = j.contains("geometry");
  if (has_layout == has_geometry) {
    throw ConfigError(std::string(ctx) + ": give exactly one of 'layout' or 'geometry'");
  }
  LayoutSource s;
  if (has_layout) s.layout = resolve(base_dir, get_required<std::string>(j, "layout", ctx));
  if (has_geometry) s.geometry = spec_from_json(j.at("geometry"));
  return s;
}

bool is_simulation_key(std::string_view key) {
  static constexpr std::string_view keys[] = {"n_core",      "thickness_nm", "design_wavelength_nm", "n_eff",
                                              "dx_nm",       "padding_nm",   "band_lo_thz",          "band_hi_thz",
                                              "steps",       "courant",      "pml_cells",            "allow_unstable"};
  for (std::string_view k : keys) {
    if (k == key) return true;
  }
  return false;
}

CavitySimOptions parse_simulation(const Json& j, std::string_view ctx) {
  CavitySimOptions o;
  o.n_core = get_or(j, "n_core", o.n_core, ctx);
  o.thickness_nm = get_or(j, "thickness_nm", o.thickness_nm, ctx);
  o.design_wavelength_nm = get_or(j, "design_wavelength_nm", o.design_wavelength_nm, ctx);
  if (j.contains("n_eff")) o.n_eff = get_required<double>(j, "n_eff", ctx);
  o.dx_nm = get_or(j, "dx_nm", o.dx_nm, ctx);
  o.padding_nm = get_or(j, "padding_nm", o.padding_nm, ctx);
  o.band_lo_thz = get_or(j, "band_lo_thz", o.band_lo_thz, ctx);
  o.band_hi_thz = get_or(j, "band_hi_thz", o.band_hi_thz, ctx);
  o.steps = get_or<std::int64_t>(j, "steps", o.steps, ctx);
  o.base.courant = get_or(j, "courant", o.base.courant, ctx);
  o.base.pml_cells = get_or(j, "pml_cells", o.base.pml_cells, ctx);
  o.base.allow_unstable = get_or(j, "allow_unstable", false, ctx);
  positive(o.n_core, ctx, "n_core");
  positive(o.thickness_nm, ctx, "thickness_nm");
  positive(o.design_wavelength_nm, ctx, "design_wavelength_nm");
  positive(o.dx_nm, ctx, "dx_nm");
  positive(o.steps, ctx, "steps");
  if (o.n_eff && !(*o.n_eff >= 1.0)) throw ConfigError(std::string(ctx) + ": field 'n_eff' must be >= 1");
  return o;
}

/// Top-level key check; `simulation` also admits the cavity run options.
void check_keys(const Json& j, std::initializer_list<std::string_view> own, std::string_view ctx,
                bool simulation = false) {
  if (!j.is_object()) throw ConfigError(std::string(ctx) + ": expected a JSON object");
  for (const auto& item : j.items()) {
    bool known = item.key() == "schema_version" || item.key() == "out" || item.key() == "seed";
    for (std::string_view k : own) known = known || k == item.key();
    known = known || (simulation && is_simulation_key(item.key()));
    if (!known) throw ConfigError(std::string(ctx) + ": unknown field '" + item.key() + "'");
  }
}

std::string common_help() {
  return "Common config fields:\n"
         "  schema_version   int, must be 1 (required)\n"
         "  out              output directory, relative to the config file (--out overrides)\n"
         "  seed             unsigned 64-bit RNG seed (--seed overrides)\n";
}

std::string simulation_help() {
  return "  n_core               core refractive index (default 2.41)\n"
         "  thickness_nm         film thickness, nm (default 160)\n"
         "  design_wavelength_nm wavelength where n_eff is solved, nm (default 737)\n"
         "  n_eff                effective index override (optional)\n"
         "  dx_nm                grid cell, nm (default 16)\n"
         "  padding_nm           air/slab margin around the outline, nm (default 600)\n"
         "  band_lo_thz          lower edge of the analysed band, THz (default 300)\n"
         "  band_hi_thz          upper edge of the analysed band, THz (default 500)\n"
         "  steps                time steps (default 30000)\n"
         "  courant              fraction of the 2D stability limit (default 0.5)\n"
         "  pml_cells            absorbing layer thickness, cells (default 12)\n"
         "  allow_unstable       accept courant >= 1 for diagnostics (default false)\n";
}

}  // namespace

Json load_config_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return Json::parse(text.str());
  } catch (const Json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
}

DesignConfig parse_design_config(const Json& j, const fs::path& base_dir) {
  constexpr std::string_view ctx = "design";
  check_keys(j, {"geometry", "min_gap_nm", "min_clearance_nm"}, ctx);
  DesignConfig c;
  c.common = parse_common(j, base_dir, ctx);
  if (!j.contains("geometry")) throw_missing_field(ctx, "geometry");
  c.geometry = spec_from_json(j.at("geometry"));
  c.min_gap_nm = get_or(j, "min_gap_nm", c.min_gap_nm, ctx);
  c.min_clearance_nm = get_or(j, "min_clearance_nm", c.min_clearance_nm, ctx);
  return c;
}

SimulateConfig parse_simulate_config(const Json& j, const fs::path& base_dir) {
  constexpr std::string_view ctx = "simulate";
  check_keys(j, {"mode", "layout", "geometry", "sweep_a_nm", "cells_per_wavelength", "wavelength_nm"}, ctx, true);
  SimulateConfig c;
  c.common = parse_common(j, base_dir, ctx);
  const auto mode = get_or<std::string>(j, "mode", "cavity", ctx);
  if (mode == "vacuum") {
    c.mode = SimulateConfig::Mode::Vacuum;
  } else if (mode != "cavity") {
    throw ConfigError("simulate: field 'mode' must be 'cavity' or 'vacuum'");
  }
  c.options = parse_simulation(j, ctx);
  if (c.mode == SimulateConfig::Mode::Vacuum) {
    if (j.contains("layout") || j.contains("geometry") || j.contains("sweep_a_nm")) {
      throw ConfigError("simulate: vacuum mode takes no layout, geometry or sweep");
    }
    c.cells_per_wavelength = get_or(j, "cells_per_wavelength", c.cells_per_wavelength, ctx);
    c.wavelength_nm = get_or(j, "wavelength_nm", c.wavelength_nm, ctx);
    return c;
  }
  if (j.contains("cells_per_wavelength") || j.contains("wavelength_nm")) {
    throw ConfigError("simulate: cells_per_wavelength and wavelength_nm apply to vacuum mode only");
  }
  c.source = parse_source(j, base_dir, ctx);
  c.sweep_a_nm = get_or<std::vector<double>>(j, "sweep_a_nm", {}, ctx);
  if (!c.sweep_a_nm.empty() && c.source.layout) {
    throw ConfigError("simulate: field 'sweep_a_nm' needs an inline 'geometry'");
  }
  for (double a : c.sweep_a_nm) positive(a, ctx, "sweep_a_nm");
  return c;
}

BandsConfig parse_bands_config(const Json& j, const fs::path& base_dir) {
  constexpr std::string_view ctx = "bands";
  check_keys(j, {"a_nm", "r_nm", "n_eff", "n_core", "thickness_nm", "wavelength_nm", "design_wavelength_nm", "n_pw",
                 "n_bands", "points_per_segment"},
             ctx);
  BandsConfig c;
  c.common = parse_common(j, base_dir, ctx);
  c.a_nm = get_or(j, "a_nm", c.a_nm, ctx);
  c.r_nm = get_or(j, "r_nm", c.r_nm, ctx);
  if (j.contains("n_eff")) c.n_eff = get_required<double>(j, "n_eff", ctx);
  c.n_core = get_or(j, "n_core", c.n_core, ctx);
  c.thickness_nm = get_or(j, "thickness_nm", c.thickness_nm, ctx);
  c.wavelength_nm = get_or(j, "wavelength_nm", c.wavelength_nm, ctx);
  if (j.contains("design_wavelength_nm")) c.design_wavelength_nm = get_required<double>(j, "design_wavelength_nm", ctx);
  c.n_pw = get_or(j, "n_pw", c.n_pw, ctx);
  c.n_bands = get_or(j, "n_bands", c.n_bands, ctx);
  c.points_per_segment = get_or(j, "points_per_segment", c.points_per_segment, ctx);
  positive(c.a_nm, ctx, "a_nm");
  positive(c.n_bands, ctx, "n_bands");
  positive(c.points_per_segment, ctx, "points_per_segment");
  return c;
}

FitConfig parse_fit_config(const Json& j, const fs::path& base_dir) {
  constexpr std::string_view ctx = "fit";
  check_keys(j, {"model", "data", "scans", "forward", "backward", "t_start_ns", "q_threshold"}, ctx);
  FitConfig c;
  c.common = parse_common(j, base_dir, ctx);
  const auto model = get_required<std::string>(j, "model", ctx);
  using M = FitConfig::Model;
  if (model == "lorentzian") {
    c.model = M::Lorentzian;
  } else if (model == "dip") {
    c.model = M::Dip;
  } else if (model == "lifetime") {
    c.model = M::Lifetime;
  } else if (model == "g2") {
    c.model = M::G2;
  } else if (model == "ple") {
    c.model = M::Ple;
  } else if (model == "hysteresis") {
    c.model = M::Hysteresis;
  } else {
    throw ConfigError("fit: field 'model' must be one of lorentzian, dip, lifetime, g2, ple, hysteresis");
  }
  if (c.model == M::Ple) {
    if (j.contains("data") || j.contains("forward") || j.contains("backward")) {
      throw ConfigError("fit: model 'ple' takes 'scans' only");
    }
    for (const auto& p : get_required<std::vector<std::string>>(j, "scans", ctx)) c.data.push_back(resolve(base_dir, p));
  } else if (c.model == M::Hysteresis) {
    if (j.contains("data") || j.contains("scans")) throw ConfigError("fit: model 'hysteresis' takes 'forward' and 'backward'");
    c.data.push_back(resolve(base_dir, get_required<std::string>(j, "forward", ctx)));
    c.data.push_back(resolve(base_dir, get_required<std::string>(j, "backward", ctx)));
    c.q_threshold = get_or(j, "q_threshold", c.q_threshold, ctx);
  } else {
    if (j.contains("scans") || j.contains("forward") || j.contains("backward")) {
      throw ConfigError("fit: model '" + model + "' takes 'data' only");
    }
    c.data.push_back(resolve(base_dir, get_required<std::string>(j, "data", ctx)));
  }
  if (j.contains("t_start_ns")) {
    if (c.model != M::Lifetime) throw ConfigError("fit: field 't_start_ns' applies to model 'lifetime' only");
    c.t_start_ns = get_required<double>(j, "t_start_ns", ctx);
  }
  if (j.contains("q_threshold") && c.model != M::Hysteresis) {
    throw ConfigError("fit: field 'q_threshold' applies to model 'hysteresis' only");
  }
  return c;
}

CqedConfig parse_cqed_config(const Json& j, const fs::path& base_dir) {
  constexpr std::string_view ctx = "cqed";
  check_keys(j, {"inputs"}, ctx);
  CqedConfig c;
  c.common = parse_common(j, base_dir, ctx);
  c.inputs = j.contains("inputs") ? cqed_inputs_from_json(j.at("inputs")) : default_cqed_inputs();
  return c;
}

YieldConfig parse_yield_config(const Json& j, const fs::path& base_dir) {
  constexpr std::string_view ctx = "yield";
  check_keys(j, {"layout", "geometry", "simulation", "disorder", "n_samples", "criteria", "alpha", "q_base"}, ctx);
  YieldConfig c;
  c.common = parse_common(j, base_dir, ctx);
  c.source = parse_source(j, base_dir, ctx);
  if (j.contains("simulation")) {
    const Json& s = j.at("simulation");
    if (!s.is_object()) throw_field_error(ctx, "simulation");
    for (const auto& item : s.items()) {
      if (!is_simulation_key(item.key())) throw ConfigError("yield.simulation: unknown field '" + item.key() + "'");
    }
    c.options = parse_simulation(s, "yield.simulation");
  }
  if (j.contains("disorder")) {
    const Json& d = j.at("disorder");
    require_known_keys(d, {"sigma_r_nm", "sigma_xy_nm", "sigma_d_nm"}, "yield.disorder");
    c.model.sigma_r_nm = get_or(d, "sigma_r_nm", c.model.sigma_r_nm, "yield.disorder");
    c.model.sigma_xy_nm = get_or(d, "sigma_xy_nm", c.model.sigma_xy_nm, "yield.disorder");
    c.model.sigma_d_nm = get_or(d, "sigma_d_nm", c.model.sigma_d_nm, "yield.disorder");
  }
  c.model.seed = c.common.seed;
  c.n_samples = get_or(j, "n_samples", c.n_samples, ctx);
  positive(c.n_samples, ctx, "n_samples");
  if (j.contains("criteria")) {
    const Json& k = j.at("criteria");
    require_known_keys(k, {"q_threshold", "wavelength_tol_percent"}, "yield.criteria");
    c.criteria.q_threshold = get_or(k, "q_threshold", c.criteria.q_threshold, "yield.criteria");
    c.criteria.wavelength_tol_percent =
        get_or(k, "wavelength_tol_percent", c.criteria.wavelength_tol_percent, "yield.criteria");
  }
  c.alpha = get_required<double>(j, "alpha", ctx);
  if (!(c.alpha >= 0.0)) throw ConfigError("yield: field 'alpha' must be >= 0");
  if (j.contains("q_base")) {
    c.q_base = get_required<double>(j, "q_base", ctx);
    positive(*c.q_base, ctx, "q_base");
  }
  return c;
}

ReportConfig parse_report_config(const Json& j, const fs::path& base_dir) {
  constexpr std::string_view ctx = "report";
  check_keys(j, {"entries", "fits", "cqed", "plot_csv"}, ctx);
  ReportConfig c;
  c.common = parse_common(j, base_dir, ctx);
  if (j.contains("entries")) {
    const Json& list = j.at("entries");
    if (!list.is_array()) throw_field_error(ctx, "entries");
    for (const Json& e : list) {
      require_known_keys(e, {"label", "q", "wavelength_nm", "cavity_type"}, "report.entries");
      ResultEntry r;
      r.label = get_required<std::string>(e, "label", "report.entries");
      r.q = get_required<double>(e, "q", "report.entries");
      r.wavelength_nm = get_or(e, "wavelength_nm", r.wavelength_nm, "report.entries");
      r.cavity_type = get_or(e, "cavity_type", r.cavity_type, "report.entries");
      positive(r.q, "report.entries", "q");
      if (r.cavity_type != "1D" && r.cavity_type != "2D") {
        throw ConfigError("report.entries: field 'cavity_type' must be '1D' or '2D'");
      }
      c.entries.push_back(r);
    }
  }
  for (const auto& p : get_or<std::vector<std::string>>(j, "fits", {}, ctx)) c.fits.push_back(resolve(base_dir, p));
  if (j.contains("cqed")) c.cqed = cqed_inputs_from_json(j.at("cqed"));
  c.plot_csv = get_or(j, "plot_csv", c.plot_csv, ctx);
  if (c.entries.empty() && c.fits.empty() && !c.cqed) {
    throw ConfigError("report: nothing to report; give 'entries', 'fits' or 'cqed'");
  }
  return c;
}

std::string design_fields_help() {
  return common_help() +
         "Design fields:\n"
         "  geometry           object, required; \"type\": \"nanobeam1d\" or \"phc2d\"\n"
         "    nanobeam1d: a_nm (269), r_nm (65), w_nm (370), d_nm (160), taper_coeffs (fractions of a),\n"
         "                n_mirror (10), waveguide_coupled (false), holes_removed (9)\n"
         "    phc2d:      a_nm (252), r_nm (65), d_nm (160), b1_nm (10.1), shift_ratios ([1,0.75,0.5,0.25]),\n"
         "                n_rows (7), n_cols (16)\n"
         "  min_gap_nm         smallest allowed edge gap between holes, nm (default 20)\n"
         "  min_clearance_nm   smallest allowed hole clearance to a closed outline edge, nm (default 20)\n";
}

std::string simulate_fields_help() {
  return common_help() +
         "Simulate fields:\n"
         "  mode                 \"cavity\" (default) or \"vacuum\" (pulse-speed check)\n"
         "  layout               layout JSON written by design (cavity mode; or use geometry)\n"
         "  geometry             inline geometry object, as for design\n"
         "  sweep_a_nm           list of lattice constants, nm; one run per value (inline geometry)\n"
         "  cells_per_wavelength vacuum mode grid resolution (default 20)\n"
         "  wavelength_nm        vacuum mode carrier wavelength, nm (default 737)\n" +
         simulation_help();
}

std::string bands_fields_help() {
  return common_help() +
         "Bands fields:\n"
         "  a_nm                 triangular lattice constant, nm (default 252)\n"
         "  r_nm                 hole radius, nm (default 65)\n"
         "  n_eff                background index (optional; otherwise the slab TE0 index)\n"
         "  n_core               slab core index (default 2.41)\n"
         "  thickness_nm         slab thickness, nm (default 160)\n"
         "  wavelength_nm        wavelength for the slab solve, nm (default 737)\n"
         "  design_wavelength_nm wavelength whose a/lambda is checked against the gaps, nm (optional)\n"
         "  n_pw                 plane waves per dimension, odd >= 7 (default 11)\n"
         "  n_bands              bands kept (default 8)\n"
         "  points_per_segment   k points per path segment (default 30)\n";
}

std::string fit_fields_help() {
  return common_help() +
         "Fit fields:\n"
         "  model        lorentzian | dip | lifetime | g2 | ple | hysteresis (required)\n"
         "  data         spectrum CSV (axis nm or GHz) or histogram CSV (t_ns, counts)\n"
         "  scans        ple: list of spectrum CSVs on a GHz axis, time ordered\n"
         "  forward      hysteresis: forward scan CSV\n"
         "  backward     hysteresis: backward scan CSV\n"
         "  t_start_ns   lifetime: fit start, ns (default histogram peak + 2 bins)\n"
         "  q_threshold  hysteresis: relative Q difference flagged (default 0.2)\n";
}

std::string cqed_fields_help() {
  return common_help() +
         "Cqed fields:\n"
         "  inputs       object; every key optional, defaults in parentheses\n"
         "    q_purcell (1.2e5), q_intrinsic (1.8e5), mode_volume ((lambda/n)^3, 0.5), wavelength_nm (737),\n"
         "    tau_on_ns (0.47), tau_off_ns (1.3) or tau_bulk_ns, gamma_ghz (0.12), debye_waller (0.70),\n"
         "    branching_d (0.193), g_ghz (8) or g_preset (experimental|theoretical), q_loaded (8.4e4),\n"
         "    r0 (0.046) or contrast, eta_tot (0.4225), eta_s (1), detuning_nm (0.4)\n";
}

std::string yield_fields_help() {
  return common_help() +
         "Yield fields:\n"
         "  layout | geometry  hole source, as for simulate\n"
         "  simulation         baseline run options (object):\n" +
         simulation_help() +
         "  disorder           object: sigma_r_nm (0), sigma_xy_nm (0), sigma_d_nm (1), nm\n"
         "  n_samples          Monte Carlo samples (default 500)\n"
         "  criteria           object: q_threshold (2e4), wavelength_tol_percent (2.9)\n"
         "  alpha              Q degradation constant in 1/Q = 1/Q_base + alpha (sigma/a)^2 (required)\n"
         "  q_base             baseline Q override (optional; default the simulated Q)\n";
}

std::string report_fields_help() {
  return common_help() +
         "Report fields:\n"
         "  entries    list of {label, q, wavelength_nm (737), cavity_type (\"1D\"|\"2D\")}\n"
         "  fits       list of FitResult JSON paths; q_loaded or q becomes an entry\n"
         "  cqed       cqed inputs object, as for the cqed command (optional)\n"
         "  plot_csv   also write comparison_series.csv (default true)\n";
}

}  // namespace phc::cli
