#include "phc/cqed.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "phc/error.hpp"
#include "phc/format.hpp"

namespace phc {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive");
}

void require_fraction(double v, const char* what) {
  if (!(v > 0.0 && v <= 1.0)) throw DomainError(std::string(what) + " must lie in (0, 1]");
}

Sourced dflt(double v, const char* unit) { return {v, unit, "default"}; }

}  // namespace

void validate(const EmitterParams& e) {
  require_positive(e.gamma_ghz, "emitter linewidth gamma");
  require_positive(e.g_ghz, "coupling g");
  require_fraction(e.debye_waller, "Debye-Waller factor");
  require_fraction(e.branching_d, "branching ratio");
}

double purcell_ideal(QualityFactor q, ModeVolume v) {
  require_positive(q.value, "quality factor");
  require_positive(v.value, "mode volume");
  return 3.0 / (4.0 * std::numbers::pi * std::numbers::pi) * q.value / v.value;
}

double zpl_fraction(const EmitterParams& e) {
  validate(e);
  return e.debye_waller * e.branching_d;
}

double purcell_from_lifetimes(Nanoseconds tau_on, Nanoseconds tau_off, const EmitterParams& e) {
  require_positive(tau_on.value, "tau_on");
  require_positive(tau_off.value, "tau_off");
  if (tau_on.value > tau_off.value) throw DomainError("tau_on > tau_off: lifetime lengthening is not supported");
  return (tau_off.value / tau_on.value - 1.0) / zpl_fraction(e);
}

double cooperativity(Rate g, Rate kappa, Rate gamma) {
  require_positive(g.ghz, "g");
  require_positive(kappa.ghz, "kappa");
  require_positive(gamma.ghz, "gamma");
  return 4.0 * g.ghz * g.ghz / (kappa.ghz * gamma.ghz);
}

CouplingBudget split_intrinsic_extrinsic(double q_loaded, double r0, CouplingRegime regime) {
  require_positive(q_loaded, "loaded Q");
  if (!(r0 >= 0.0 && r0 <= 1.0)) throw DomainError("r0 must lie in [0, 1]");
  const double s = std::sqrt(r0);
  const double inf = std::numeric_limits<double>::infinity();
  const double q_big = s < 1.0 ? 2.0 * q_loaded / (1.0 - s) : inf;
  const double q_small = 2.0 * q_loaded / (1.0 + s);

  CouplingBudget b;
  b.q_loaded = q_loaded;
  b.r0 = r0;
  b.regime = regime;
  switch (regime) {
    case CouplingRegime::Under:
      b.kappa_i_fraction = 0.5 * (1.0 + s);
      b.kappa_e_fraction = 0.5 * (1.0 - s);
      b.q_i = q_small;
      b.q_e = q_big;
      break;
    case CouplingRegime::Over:
      b.kappa_i_fraction = 0.5 * (1.0 - s);
      b.kappa_e_fraction = 0.5 * (1.0 + s);
      b.q_i = q_big;
      b.q_e = q_small;
      break;
    case CouplingRegime::Both:
      b.interchangeable = true;
      b.kappa_i_fraction = 0.5 * (1.0 - s);
      b.kappa_e_fraction = 0.5 * (1.0 + s);
      b.q_i = q_big;
      b.q_e = q_small;
      break;
  }
  return b;
}

double coupling_efficiency(double eta_tot, double eta_s) {
  if (!(eta_s > 0.0 && eta_s <= 1.0)) throw DomainError("setup efficiency must lie in (0, 1]");
  if (!(eta_tot >= 0.0 && eta_tot <= 1.0)) throw DomainError("total efficiency must lie in [0, 1]");
  if (eta_tot > eta_s) {
    throw CalibrationError("total efficiency " + format_double(eta_tot) + " exceeds setup efficiency " +
                           format_double(eta_s));
  }
  return std::sqrt(eta_tot / eta_s);
}

double detuning_enhancement(double f0, Rate detuning, Rate kappa) {
  if (!(f0 >= 0.0)) throw DomainError("F0 must be non-negative");
  require_positive(kappa.ghz, "kappa");
  const double x = 2.0 * detuning.ghz / kappa.ghz;
  return f0 / (1.0 + x * x);
}

std::string to_string(CouplingRegime r) {
  switch (r) {
    case CouplingRegime::Over: return "over";
    case CouplingRegime::Under: return "under";
    case CouplingRegime::Both: return "both";
  }
  return "both";
}

CouplingRegime coupling_regime_from_string(const std::string& s) {
  if (s == "over") return CouplingRegime::Over;
  if (s == "under") return CouplingRegime::Under;
  if (s == "both") return CouplingRegime::Both;
  throw ConfigError("regime must be one of over, under, both (got '" + s + "')");
}

CqedInputs default_cqed_inputs() {
  CqedInputs in;
  in.q_purcell = dflt(1.2e5, "");
  in.q_intrinsic = dflt(1.8e5, "");
  in.mode_volume = dflt(0.5, "(lambda/n)^3");
  in.wavelength_nm = dflt(737.0, "nm");
  in.tau_on_ns = dflt(0.47, "ns");
  in.tau_off_ns = dflt(1.3, "ns");
  const EmitterParams e;
  in.gamma_ghz = dflt(e.gamma_ghz, "GHz");
  in.debye_waller = dflt(e.debye_waller, "");
  in.branching_d = dflt(e.branching_d, "");
  in.g_ghz = dflt(e.g_ghz, "GHz");
  in.q_loaded = dflt(8.4e4, "");
  in.r0 = dflt(1.0 - 0.954, "");
  in.eta_tot = dflt(0.4225, "");
  in.eta_s = dflt(1.0, "");
  in.detuning_nm = dflt(0.4, "nm");
  return in;
}

CqedInputs cqed_inputs_from_json(const Json& config) {
  static constexpr const char* kCtx = "cqed";
  require_known_keys(config,
                     {"q_purcell", "q_intrinsic", "mode_volume", "wavelength_nm", "tau_on_ns", "tau_off_ns",
                      "tau_bulk_ns", "gamma_ghz", "debye_waller", "branching_d", "g_ghz", "g_preset", "q_loaded",
                      "r0", "contrast", "eta_tot", "eta_s", "detuning_nm"},
                     kCtx);
  CqedInputs in = default_cqed_inputs();
  auto take = [&](const char* key, Sourced& slot) {
    if (config.contains(key)) slot = {get_required<double>(config, key, kCtx), slot.unit, "config"};
  };
  take("q_purcell", in.q_purcell);
  take("q_intrinsic", in.q_intrinsic);
  take("mode_volume", in.mode_volume);
  take("wavelength_nm", in.wavelength_nm);
  take("tau_on_ns", in.tau_on_ns);
  if (config.contains("tau_off_ns") && config.contains("tau_bulk_ns")) {
    throw ConfigError("cqed: give tau_off_ns or tau_bulk_ns, not both");
  }
  take("tau_off_ns", in.tau_off_ns);
  if (config.contains("tau_bulk_ns")) {
    in.tau_off_ns = {get_required<double>(config, "tau_bulk_ns", kCtx), "ns",
                     "config: tau_bulk_ns (unpatterned-area lifetime assumed equal to tau_off)"};
  }
  take("gamma_ghz", in.gamma_ghz);
  take("debye_waller", in.debye_waller);
  take("branching_d", in.branching_d);
  if (config.contains("g_ghz") && config.contains("g_preset")) {
    throw ConfigError("cqed: give g_ghz or g_preset, not both");
  }
  take("g_ghz", in.g_ghz);
  if (config.contains("g_preset")) {
    const auto preset = get_required<std::string>(config, "g_preset", kCtx);
    if (preset == "experimental") {
      in.g_ghz = {EmitterParams{}.g_ghz, "GHz", "config: g_preset experimental"};
    } else if (preset == "theoretical") {
      in.g_ghz = {kIdealCouplingGhz, "GHz", "config: g_preset theoretical"};
    } else {
      throw ConfigError("cqed: g_preset must be 'experimental' or 'theoretical'");
    }
  }
  take("q_loaded", in.q_loaded);
  if (config.contains("r0") && config.contains("contrast")) throw ConfigError("cqed: give r0 or contrast, not both");
  take("r0", in.r0);
  if (config.contains("contrast")) {
    in.r0 = {1.0 - get_required<double>(config, "contrast", kCtx), "", "config: 1 - contrast"};
  }
  take("eta_tot", in.eta_tot);
  take("eta_s", in.eta_s);
  take("detuning_nm", in.detuning_nm);
  return in;
}

CqedReport make_cqed_report(const CqedInputs& in) {
  CqedReport r;
  r.inputs = in;
  EmitterParams e;
  e.gamma_ghz = in.gamma_ghz.value;
  e.debye_waller = in.debye_waller.value;
  e.branching_d = in.branching_d.value;
  e.g_ghz = in.g_ghz.value;
  validate(e);

  const Wavelength lambda{in.wavelength_nm.value};
  r.f_ideal = purcell_ideal({in.q_purcell.value}, {in.mode_volume.value});
  r.epsilon_zpl = zpl_fraction(e);
  r.f_zpl = purcell_from_lifetimes({in.tau_on_ns.value}, {in.tau_off_ns.value}, e);
  r.kappa_ghz = q_to_kappa({in.q_intrinsic.value}, lambda).ghz;
  r.kappa_loaded_ghz = q_to_kappa({in.q_loaded.value}, lambda).ghz;
  r.cooperativity = cooperativity({e.g_ghz}, {r.kappa_ghz}, {e.gamma_ghz});
  r.cooperativity_loaded = cooperativity({e.g_ghz}, {r.kappa_loaded_ghz}, {e.gamma_ghz});
  r.budget = split_intrinsic_extrinsic(in.q_loaded.value, in.r0.value, CouplingRegime::Both);
  r.budget.eta_s = in.eta_s.value;
  r.budget.eta_tot = in.eta_tot.value;
  r.budget.eta_c = coupling_efficiency(in.eta_tot.value, in.eta_s.value);
  r.detuning_ghz = wavelength_span_to_rate(lambda, {in.detuning_nm.value}).ghz;
  // Detuning rolloff uses the linewidth of the emitter-coupled device.
  const double kappa_purcell = q_to_kappa({in.q_purcell.value}, lambda).ghz;
  r.f_detuned = detuning_enhancement(r.f_zpl, {r.detuning_ghz}, {kappa_purcell});

  const double mid = 0.5 * (r.budget.q_i + r.budget.q_e);
  r.notes.push_back("q_i/q_e cannot be assigned from a reflection dip alone; midpoint of the pair = " +
                    format_double(mid) + " (reported intrinsic Q: (1.8 +/- 0.4)e5)");
  r.notes.push_back("contrast 95.3% and 95.4% both appear in the source data; r0 here is " +
                    format_double(in.r0.value));
  r.notes.push_back("F(detuning) is a Lorentzian rolloff for exploration; it is not reconciled with the ~20-fold "
                    "intensity enhancement");
  return r;
}

namespace {

Json sourced_json(const Sourced& s) {
  Json j{{"value", s.value}, {"provenance", s.provenance}};
  if (!s.unit.empty()) j["unit"] = s.unit;
  return j;
}

}  // namespace

Json to_json(const CqedReport& r) {
  const CqedInputs& in = r.inputs;
  Json inputs{{"q_purcell", sourced_json(in.q_purcell)},
              {"q_intrinsic", sourced_json(in.q_intrinsic)},
              {"mode_volume", sourced_json(in.mode_volume)},
              {"wavelength_nm", sourced_json(in.wavelength_nm)},
              {"tau_on_ns", sourced_json(in.tau_on_ns)},
              {"tau_off_ns", sourced_json(in.tau_off_ns)},
              {"gamma_ghz", sourced_json(in.gamma_ghz)},
              {"debye_waller", sourced_json(in.debye_waller)},
              {"branching_d", sourced_json(in.branching_d)},
              {"g_ghz", sourced_json(in.g_ghz)},
              {"q_loaded", sourced_json(in.q_loaded)},
              {"r0", sourced_json(in.r0)},
              {"eta_tot", sourced_json(in.eta_tot)},
              {"eta_s", sourced_json(in.eta_s)},
              {"detuning_nm", sourced_json(in.detuning_nm)}};
  const CouplingBudget& b = r.budget;
  Json budget{{"q_loaded", b.q_loaded},
              {"r0", b.r0},
              {"contrast", 1.0 - b.r0},
              {"regime", to_string(b.regime)},
              {"interchangeable", b.interchangeable},
              {"q_i", std::isfinite(b.q_i) ? Json(b.q_i) : Json(nullptr)},
              {"q_e", std::isfinite(b.q_e) ? Json(b.q_e) : Json(nullptr)},
              {"eta_s", *b.eta_s},
              {"eta_tot", *b.eta_tot},
              {"eta_c", *b.eta_c}};
  return Json{{"inputs", inputs},
              {"f_ideal", r.f_ideal},
              {"epsilon_zpl", r.epsilon_zpl},
              {"f_zpl", r.f_zpl},
              {"kappa_ghz", r.kappa_ghz},
              {"kappa_loaded_ghz", r.kappa_loaded_ghz},
              {"cooperativity", r.cooperativity},
              {"cooperativity_loaded", r.cooperativity_loaded},
              {"coupling_budget", budget},
              {"detuning", {{"detuning_ghz", r.detuning_ghz}, {"f_detuned", r.f_detuned}}},
              {"notes", r.notes}};
}

std::string to_text(const CqedReport& r) {
  std::ostringstream o;
  auto line = [&](const std::string& name, const Sourced& s) {
    o << "  " << name << " = " << format_double(s.value) << (s.unit.empty() ? "" : " " + s.unit) << "  ["
      << s.provenance << "]\n";
  };
  const CqedInputs& in = r.inputs;
  o << "inputs\n";
  line("q_purcell", in.q_purcell);
  line("q_intrinsic", in.q_intrinsic);
  line("mode_volume", in.mode_volume);
  line("wavelength", in.wavelength_nm);
  line("tau_on", in.tau_on_ns);
  line("tau_off", in.tau_off_ns);
  line("gamma", in.gamma_ghz);
  line("debye_waller", in.debye_waller);
  line("branching_d", in.branching_d);
  line("g", in.g_ghz);
  line("q_loaded", in.q_loaded);
  line("r0", in.r0);
  line("eta_tot", in.eta_tot);
  line("eta_s", in.eta_s);
  line("detuning", in.detuning_nm);
  o << "figures of merit\n";
  o << "  F_ideal = " << format_double(r.f_ideal) << "\n";
  o << "  epsilon_ZPL = " << format_double(r.epsilon_zpl) << "\n";
  o << "  F_ZPL = " << format_double(r.f_zpl) << "\n";
  o << "  kappa = " << format_double(r.kappa_ghz) << " GHz (loaded " << format_double(r.kappa_loaded_ghz)
    << " GHz)\n";
  o << "  C = " << format_double(r.cooperativity) << " (loaded " << format_double(r.cooperativity_loaded) << ")\n";
  o << "  Q_i / Q_e (interchangeable) = " << format_double(r.budget.q_i) << " / " << format_double(r.budget.q_e)
    << "\n";
  o << "  eta_c = " << format_double(*r.budget.eta_c) << "\n";
  o << "  F at " << format_double(r.detuning_ghz) << " GHz detuning = " << format_double(r.f_detuned) << "\n";
  o << "notes\n";
  for (const auto& n : r.notes) o << "  - " << n << "\n";
  return o.str();
}

}  // namespace phc
