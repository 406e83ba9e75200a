#include <CLI11.hpp>

#include <cmath>
#include <ostream>

#include "phc/bands2d.hpp"
#include "phc/cli.hpp"
#include "phc/error.hpp"
#include "phc/field_io.hpp"
#include "phc/format.hpp"
#include "phc/layout_io.hpp"
#include "phc/specfit.hpp"
#include "phc/spectrum_io.hpp"
#include "phc/wave1d.hpp"

namespace phc::cli {

namespace {

namespace fs = std::filesystem;

struct Context {
  GlobalOptions global;
  std::ostream& out;
  std::ostream& err;
};

fs::path config_path(const GlobalOptions& g) {
  if (g.config.empty()) throw ConfigError("this command needs --config <path>");
  return fs::path(g.config);
}

fs::path config_dir(const fs::path& config) {
  const fs::path parent = config.parent_path();
  return parent.empty() ? fs::path(".") : parent;
}

/// Picks --out over the config value and refuses to write into a non-empty
/// directory unless --force was given.
fs::path prepare_out(const GlobalOptions& g, const CommonConfig& c) {
  fs::path dir;
  if (!g.out.empty()) {
    dir = g.out;
  } else if (c.out) {
    dir = *c.out;
  } else {
    throw ConfigError("no output directory: pass --out or set 'out' in the config");
  }
  std::error_code ec;
  if (fs::exists(dir, ec)) {
    if (!fs::is_directory(dir, ec)) throw IoError("output path '" + dir.string() + "' is not a directory");
    if (!fs::is_empty(dir, ec) && !g.force) {
      throw ConfigError("output directory '" + dir.string() + "' is not empty; pass --force to write into it");
    }
  } else if (!fs::create_directories(dir, ec) || ec) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
  return dir;
}

void write_json(const fs::path& path, const Json& j) { write_text_file(path.string(), j.dump(2) + "\n"); }

std::uint64_t effective_seed(const GlobalOptions& g, const CommonConfig& c) { return g.seed ? *g.seed : c.seed; }

Json resonance_json(const Resonance& r) {
  return Json{{"frequency_thz", r.frequency_thz},
              {"wavelength_nm", kSpeedOfLightNmTHz / r.frequency_thz},
              {"q", r.q},
              {"lossless", r.lossless},
              {"amplitude", r.amplitude}};
}

HoleList load_holes(const LayoutSource& s) {
  if (s.layout) return import_layout_json(read_text_file(s.layout->string()));
  return generate_layout(s.geometry);
}

GeometrySpec with_lattice(GeometrySpec spec, double a_nm) {
  if (auto* s1 = std::get_if<Nanobeam1DSpec>(&spec)) s1->a_nm = a_nm;
  if (auto* s2 = std::get_if<Phc2DSpec>(&spec)) s2->a_nm = a_nm;
  return spec;
}

int cmd_design(Context& ctx) {
  const fs::path cfg_path = config_path(ctx.global);
  const DesignConfig cfg = parse_design_config(load_config_json(cfg_path), config_dir(cfg_path));
  const fs::path dir = prepare_out(ctx.global, cfg.common);

  // Spacing invariants are reported alongside the DRC rather than aborting,
  // so an overlapping design still yields its layout and the violation list.
  const HoleList holes = draft_layout(cfg.geometry);
  std::string spec_violation;
  try {
    std::visit(
        [](const auto& s) {
          if constexpr (!std::is_same_v<std::decay_t<decltype(s)>, std::monostate>) validate(s);
        },
        cfg.geometry);
  } catch (const DesignError& e) {
    spec_violation = e.what();
  }
  const auto violations = design_rule_check(holes, {cfg.min_gap_nm}, {cfg.min_clearance_nm});

  write_text_file((dir / "layout.json").string(), export_layout(holes, LayoutFormat::Json));
  write_text_file((dir / "layout.csv").string(), export_layout(holes, LayoutFormat::Csv));
  Json list = Json::array();
  for (const auto& v : violations) {
    list.push_back({{"kind", to_string(v.kind)}, {"first", v.first}, {"second", v.second}, {"value_nm", v.value_nm}});
  }
  const bool passed = violations.empty() && spec_violation.empty();
  write_json(dir / "drc.json", Json{{"schema_version", kConfigSchemaVersion},
                                    {"passed", passed},
                                    {"holes", holes.holes.size()},
                                    {"min_gap_nm", cfg.min_gap_nm},
                                    {"min_clearance_nm", cfg.min_clearance_nm},
                                    {"spec_violation", spec_violation.empty() ? Json(nullptr) : Json(spec_violation)},
                                    {"violations", list}});
  ctx.out << holes.provenance << "\n" << holes.holes.size() << " holes written to " << dir.string() << "\n";
  if (passed) {
    ctx.out << "DRC passed\n";
    return kExitOk;
  }
  if (!spec_violation.empty()) ctx.err << "design: " << spec_violation << "\n";
  ctx.err << "design: " << violations.size() << " DRC violation(s)";
  if (!violations.empty()) {
    const auto& v = violations.front();
    ctx.err << ", first: " << to_string(v.kind) << " holes " << v.first << "/" << v.second << " ("
            << format_double(v.value_nm) << " nm)";
  }
  ctx.err << "\n";
  return kExitDrc;
}

Json cavity_run_json(const CavitySimResult& r, std::int64_t steps) {
  Json modes = Json::array();
  for (const auto& m : r.modes) modes.push_back(resonance_json(m));
  Json j{{"n_eff", r.n_eff},
         {"grid", {{"nx", r.grid.nx()}, {"ny", r.grid.ny()}, {"dx_nm", r.grid.dx_nm}}},
         {"modes", modes},
         {"convergence",
          {{"steps", steps},
           {"dt_fs", r.ringdown.dt_fs},
           {"source_off_step", r.ringdown.source_off_step},
           {"ringdown_samples", steps - r.ringdown.source_off_step}}},
         {"warnings", r.warnings}};
  if (r.resonance) {
    j["resonance"] = resonance_json(*r.resonance);
    j["wavelength_nm"] = r.wavelength_nm;
    j["q"] = r.resonance->q;
  } else {
    j["resonance"] = nullptr;
  }
  j["mode_volume_lambda_n3"] = r.mode_volume ? Json(*r.mode_volume) : Json(nullptr);
  return j;
}

int cmd_simulate(Context& ctx) {
  const fs::path cfg_path = config_path(ctx.global);
  const SimulateConfig cfg = parse_simulate_config(load_config_json(cfg_path), config_dir(cfg_path));
  const fs::path dir = prepare_out(ctx.global, cfg.common);

  if (cfg.mode == SimulateConfig::Mode::Vacuum) {
    const VacuumSpeedCheck v = vacuum_speed_check(cfg.cells_per_wavelength, cfg.wavelength_nm, cfg.options.base.courant);
    write_json(dir / "summary.json",
               Json{{"schema_version", kConfigSchemaVersion},
                    {"mode", "vacuum"},
                    {"vacuum_check",
                     {{"cells_per_wavelength", v.cells_per_wavelength},
                      {"wavelength_nm", v.wavelength_nm},
                      {"distance_nm", v.distance_nm},
                      {"expected_delay_fs", v.expected_delay_fs},
                      {"phase_delay_fs", v.phase_delay_fs},
                      {"group_delay_fs", v.group_delay_fs},
                      {"relative_error", v.relative_error},
                      {"tolerance", 0.01},
                      {"passed", v.passed}}}});
    ctx.out << "vacuum phase delay error " << format_double(100.0 * v.relative_error) << "% ("
            << (v.passed ? "within" : "outside") << " 1%)\n";
    return kExitOk;
  }

  struct Run {
    std::string tag;
    std::optional<double> a_nm;
    HoleList holes;
  };
  std::vector<Run> runs;
  if (cfg.sweep_a_nm.empty()) {
    runs.push_back({"run", std::nullopt, load_holes(cfg.source)});
  } else {
    for (double a : cfg.sweep_a_nm) {
      runs.push_back({"a" + format_double(a), a, generate_layout(with_lattice(cfg.source.geometry, a))});
    }
  }

  Json list = Json::array();
  std::vector<double> wavelengths;
  for (const Run& run : runs) {
    ctx.out << "simulating " << run.holes.provenance << "\n";
    const CavitySimResult r = simulate_cavity(run.holes, cfg.options);
    std::string csv = trace_to_csv(r.ringdown.traces[0]);
    write_text_file((dir / ("trace_" + run.tag + ".csv")).string(), csv);
    write_eps((dir / ("eps_" + run.tag + ".fsnp")).string(), r.grid);
    if (r.mode) write_snapshot((dir / ("mode_" + run.tag + ".fsnp")).string(), *r.mode);
    Json j = cavity_run_json(r, cfg.options.steps);
    j["tag"] = run.tag;
    j["a_nm"] = run.a_nm ? Json(*run.a_nm) : Json(nullptr);
    j["provenance"] = run.holes.provenance;
    list.push_back(j);
    wavelengths.push_back(r.resonance ? r.wavelength_nm : std::nan(""));
    if (r.resonance) {
      ctx.out << "  resonance " << format_double(r.wavelength_nm) << " nm, Q " << format_double(r.resonance->q) << "\n";
    } else {
      ctx.out << "  no resonance found\n";
    }
  }
  Json summary{{"schema_version", kConfigSchemaVersion},
               {"mode", "cavity"},
               {"model", "2D effective-index TE; not a 3D slab simulation"},
               {"runs", list}};
  if (runs.size() > 1) {
    bool increasing = true;
    for (std::size_t i = 1; i < wavelengths.size(); ++i) {
      const bool a_up = cfg.sweep_a_nm[i] > cfg.sweep_a_nm[i - 1];
      increasing = increasing && a_up && wavelengths[i] > wavelengths[i - 1];
    }
    summary["redshift_monotonic"] = increasing;
  }
  write_json(dir / "summary.json", summary);
  return kExitOk;
}

int cmd_bands(Context& ctx) {
  const fs::path cfg_path = config_path(ctx.global);
  const BandsConfig cfg = parse_bands_config(load_config_json(cfg_path), config_dir(cfg_path));
  const fs::path dir = prepare_out(ctx.global, cfg.common);

  const double n_eff = cfg.n_eff ? *cfg.n_eff : slab_neff(cfg.n_core, 1.0, {cfg.thickness_nm}, {cfg.wavelength_nm});
  PweOptions opt;
  opt.n_pw = cfg.n_pw;
  opt.n_bands = cfg.n_bands;
  const BandStructure bands = pwe_bands({cfg.a_nm}, {cfg.r_nm}, n_eff, triangular_k_path(cfg.points_per_segment), opt);
  const auto gaps = band_gaps(bands);
  const double design_wl = cfg.design_wavelength_nm.value_or(cfg.wavelength_nm);
  const double point = cfg.a_nm / design_wl;
  Json gap_list = Json::array();
  bool inside = false;
  for (const auto& g : gaps) {
    gap_list.push_back({{"below_band", g.below_band}, {"lower", g.lower}, {"upper", g.upper}});
    inside = inside || g.contains(point);
  }
  write_text_file((dir / "bands.csv").string(), bands_to_csv(bands));
  write_json(dir / "bands.json", Json{{"schema_version", kConfigSchemaVersion},
                                      {"a_nm", cfg.a_nm},
                                      {"r_nm", cfg.r_nm},
                                      {"n_eff", n_eff},
                                      {"n_pw", bands.n_pw},
                                      {"n_planewaves", bands.n_planewaves},
                                      {"gaps", gap_list},
                                      {"design_point", {{"wavelength_nm", design_wl}, {"a_over_lambda", point}, {"in_gap", inside}}},
                                      {"warnings", bands.warnings}});
  ctx.out << gaps.size() << " gap(s); a/lambda = " << format_double(point) << (inside ? " inside" : " outside")
          << " a gap\n";
  for (const auto& w : bands.warnings) ctx.err << "bands: " << w << "\n";
  return kExitOk;
}

int cmd_fit(Context& ctx) {
  const fs::path cfg_path = config_path(ctx.global);
  const FitConfig cfg = parse_fit_config(load_config_json(cfg_path), config_dir(cfg_path));
  const fs::path dir = prepare_out(ctx.global, cfg.common);
  using M = FitConfig::Model;

  if (cfg.model == M::Ple) {
    std::vector<Spectrum> scans;
    for (const auto& p : cfg.data) scans.push_back(spectrum_from_csv(read_text_file(p.string())));
    const PleStability s = ple_stability(scans);
    write_json(dir / "ple.json", Json{{"mean_linewidth_mhz", s.mean_linewidth_mhz},
                                      {"max_drift_mhz", s.max_drift_mhz},
                                      {"drift_per_linewidth", s.drift_per_linewidth},
                                      {"centers_mhz", s.centers_mhz},
                                      {"linewidths_mhz", s.linewidths_mhz},
                                      {"used", s.used},
                                      {"excluded", s.excluded}});
    ctx.out << "mean linewidth " << format_double(s.mean_linewidth_mhz) << " MHz, drift/linewidth "
            << format_double(s.drift_per_linewidth) << "\n";
    return kExitOk;
  }
  if (cfg.model == M::Hysteresis) {
    const Spectrum fwd = spectrum_from_csv(read_text_file(cfg.data[0].string()));
    const Spectrum bwd = spectrum_from_csv(read_text_file(cfg.data[1].string()));
    const HysteresisCheck h = hysteresis_check(fwd, bwd, cfg.q_threshold);
    write_json(dir / "hysteresis.json", Json{{"q_forward", h.q_forward},
                                             {"q_backward", h.q_backward},
                                             {"center_shift", h.center_shift},
                                             {"mean_fwhm", h.mean_fwhm},
                                             {"thermo_optic", to_string(h.thermo_optic)}});
    ctx.out << "thermo-optic distortion: " << to_string(h.thermo_optic) << "\n";
    return h.thermo_optic == Verdict::Indeterminate ? kExitUnconverged : kExitOk;
  }

  FitResult fit;
  const std::string text = read_text_file(cfg.data[0].string());
  switch (cfg.model) {
    case M::Lorentzian: fit = fit_lorentzian_peak(spectrum_from_csv(text)); break;
    case M::Dip: fit = fit_reflection_dip(spectrum_from_csv(text)); break;
    case M::Lifetime: fit = fit_exponential_lifetime(histogram_from_csv(text), cfg.t_start_ns); break;
    case M::G2: fit = fit_g2(histogram_from_csv(text)); break;
    default: break;
  }
  write_json(dir / "fit.json", to_json(fit));
  for (const auto& p : fit.params) {
    ctx.out << p.name << " = " << format_double(p.value) << " +- " << format_double(p.uncertainty) << "\n";
  }
  for (const auto& [k, v] : fit.derived) ctx.out << k << " = " << format_double(v) << "\n";
  if (!fit.converged) {
    ctx.err << "fit: " << fit.model << " fit did not converge";
    if (!fit.notes.empty()) ctx.err << " (" << fit.notes.back() << ")";
    ctx.err << "\n";
    return kExitUnconverged;
  }
  return kExitOk;
}

int cmd_cqed(Context& ctx) {
  const fs::path cfg_path = config_path(ctx.global);
  const CqedConfig cfg = parse_cqed_config(load_config_json(cfg_path), config_dir(cfg_path));
  const fs::path dir = prepare_out(ctx.global, cfg.common);
  const CqedReport r = make_cqed_report(cfg.inputs);
  write_json(dir / "cqed.json", to_json(r));
  const std::string text = to_text(r);
  write_text_file((dir / "cqed.txt").string(), text);
  ctx.out << text;
  return kExitOk;
}

int cmd_yield(Context& ctx) {
  const fs::path cfg_path = config_path(ctx.global);
  YieldConfig cfg = parse_yield_config(load_config_json(cfg_path), config_dir(cfg_path));
  cfg.model.seed = effective_seed(ctx.global, cfg.common);
  const fs::path dir = prepare_out(ctx.global, cfg.common);

  const HoleList holes = load_holes(cfg.source);
  ctx.out << "baseline simulation of " << holes.provenance << "\n";
  YieldBaseline base = make_yield_baseline(holes, cfg.options, cfg.alpha);
  const double simulated_q = base.q_base;
  if (cfg.q_base) base.q_base = *cfg.q_base;
  YieldReport report = yield_study(base, cfg.model, cfg.n_samples, cfg.criteria);
  if (cfg.q_base) {
    report.notes.push_back("q_base " + format_double(*cfg.q_base) + " taken from the config; simulated baseline Q " +
                           format_double(simulated_q));
  }
  if (base.q_base < cfg.criteria.q_threshold) {
    report.notes.push_back("baseline Q is below q_threshold, so no sample can pass the Q criterion");
  }
  write_json(dir / "yield.json", to_json(report));
  write_text_file((dir / "yield_records.csv").string(), records_to_csv(report));
  write_eps((dir / "eps_baseline.fsnp").string(), base.grid);
  write_snapshot((dir / "mode_baseline.fsnp").string(), base.mode);
  ctx.out << "baseline " << format_double(base.wavelength_nm) << " nm, Q " << format_double(base.q_base) << "\n"
          << "Q above threshold: " << format_double(report.q_above.fraction) << "\n"
          << "wavelength within tolerance: " << format_double(report.wavelength_within.fraction) << "\n"
          << "both: " << format_double(report.both.fraction) << "\n";
  return kExitOk;
}

int cmd_report(Context& ctx) {
  const fs::path cfg_path = config_path(ctx.global);
  const ReportConfig cfg = parse_report_config(load_config_json(cfg_path), config_dir(cfg_path));
  const fs::path dir = prepare_out(ctx.global, cfg.common);

  std::vector<ResultEntry> entries = cfg.entries;
  for (const auto& p : cfg.fits) {
    const Json fit = Json::parse(read_text_file(p.string()), nullptr, false);
    if (fit.is_discarded()) throw IoError("fit file '" + p.string() + "' is not valid JSON");
    const auto derived = fit.find("derived");
    if (derived == fit.end() || !derived->is_object()) throw IoError("fit file '" + p.string() + "' has no derived values");
    ResultEntry e;
    e.label = p.stem().string();
    if (derived->contains("q_loaded")) {
      e.q = derived->at("q_loaded").get<double>();
    } else if (derived->contains("q")) {
      e.q = derived->at("q").get<double>();
    } else {
      throw IoError("fit file '" + p.string() + "' carries no Q");
    }
    entries.push_back(e);
  }

  std::vector<Ranking> rankings;
  Json list = Json::array();
  std::string text = "Comparison with the embedded literature table (visible-wavelength rows)\n";
  for (const auto& e : entries) {
    const Ranking r = rank_against_literature(e);
    rankings.push_back(r);
    Json j{{"label", e.label},   {"q", e.q},
           {"wavelength_nm", e.wavelength_nm}, {"cavity_type", e.cavity_type},
           {"rank", r.rank},     {"compared", r.compared},
           {"above", r.above}};
    text += "  " + e.label + ": Q " + format_double(e.q) + " ranks " + std::to_string(r.rank) + " of " +
            std::to_string(r.compared + 1) + "\n";
    try {
      const PriorRatio pr = ratio_to_prior(e.q, e.cavity_type);
      j["prior_ratio"] = {{"min", pr.min}, {"max", pr.max}, {"references", pr.references}};
      text += "    " + format_double(pr.min) + " to " + format_double(pr.max) + " times earlier " + e.cavity_type +
              " diamond cavities\n";
    } catch (const DomainError&) {
      j["prior_ratio"] = nullptr;
    }
    list.push_back(j);
  }
  Json report{{"schema_version", kConfigSchemaVersion}, {"rankings", list}};
  if (cfg.cqed) {
    const CqedReport c = make_cqed_report(*cfg.cqed);
    report["cqed"] = to_json(c);
    text += "\n" + to_text(c);
  }
  write_json(dir / "report.json", report);
  write_text_file((dir / "report.txt").string(), text);
  write_text_file((dir / "rankings.csv").string(), rankings_to_csv(rankings));
  if (cfg.plot_csv) write_text_file((dir / "comparison_series.csv").string(), comparison_series_csv(entries));
  ctx.out << text;
  return kExitOk;
}

int cmd_table(Context& ctx) {
  if (ctx.global.out.empty()) {
    ctx.out << literature_to_csv();
    return kExitOk;
  }
  const fs::path dir = prepare_out(ctx.global, CommonConfig{});
  write_text_file((dir / "literature.csv").string(), literature_to_csv());
  write_json(dir / "literature.json", literature_to_json());
  ctx.out << literature_table().size() << " rows written to " << dir.string() << "\n";
  return kExitOk;
}

int dispatch(int (*command)(Context&), Context& ctx) {
  try {
    return command(ctx);
  } catch (const DivergenceError& e) {
    ctx.err << "error: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const std::exception& e) {
    ctx.err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Photonic crystal cavity toolkit: design, simulate, fit and report.", "phc_lab"};
  app.require_subcommand(1);
  app.footer("Exit codes: 0 success, 1 config or input error, 2 DRC failure, 3 solver divergence, "
             "4 fit not converged.\nPHC_LAB_THREADS caps the worker count.");
  GlobalOptions g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config, "JSON config file")->option_text("PATH");
  app.add_option("--out", g.out, "output directory (overrides 'out' in the config)")->option_text("DIR");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (overrides 'seed' in the config)")->option_text("U64");
  app.add_flag("--force", g.force, "write into a non-empty output directory");

  struct Entry {
    const char* name;
    const char* description;
    std::string fields;
    int (*command)(Context&);
  };
  const std::vector<Entry> entries = {
      {"design", "generate a hole layout and run the design rule check", design_fields_help(), cmd_design},
      {"simulate", "2D FDTD ringdown of a layout, or the vacuum pulse-speed check", simulate_fields_help(),
       cmd_simulate},
      {"bands", "plane-wave band structure of the triangular lattice", bands_fields_help(), cmd_bands},
      {"fit", "fit a spectrum or histogram", fit_fields_help(), cmd_fit},
      {"cqed", "Purcell factor, cooperativity and coupling budget", cqed_fields_help(), cmd_cqed},
      {"yield", "Monte Carlo fabrication tolerance study", yield_fields_help(), cmd_yield},
      {"report", "rank results against the literature table", report_fields_help(), cmd_report},
      {"table", "dump the embedded literature table (CSV to stdout without --out)", "", cmd_table},
  };
  std::vector<CLI::App*> subs;
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.description);
    sub->fallthrough();
    if (!e.fields.empty()) sub->footer(e.fields);
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }
  if (seed_opt->count() > 0) g.seed = seed;

  Context ctx{g, out, err};
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i]->parsed()) return dispatch(entries[i].command, ctx);
  }
  return kExitInput;
}

}  // namespace phc::cli
