#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phc/json_util.hpp"
#include "phc/units.hpp"

namespace phc {

struct EmitterParams {
  double gamma_ghz = 0.12;       ///< natural linewidth
  double debye_waller = 0.70;
  double branching_d = 0.193;    ///< fraction of ZPL emission into the D line
  double g_ghz = 8.0;            ///< emitter-cavity coupling; 15.2 is the ideal-placement preset
};

inline constexpr double kIdealCouplingGhz = 15.2;

/// Throws DomainError when a fraction leaves (0, 1] or a rate is not positive.
void validate(const EmitterParams& e);

/// F = 3 / (4 pi^2) * Q / V with V in (lambda / n)^3.
double purcell_ideal(QualityFactor q, ModeVolume v);

double zpl_fraction(const EmitterParams& e);

/// F_ZPL = (tau_off / tau_on - 1) / (debye_waller * branching_d). tau_on > tau_off is a DomainError.
double purcell_from_lifetimes(Nanoseconds tau_on, Nanoseconds tau_off, const EmitterParams& e = {});

/// C = 4 g^2 / (kappa gamma).
double cooperativity(Rate g, Rate kappa, Rate gamma);

enum class CouplingRegime { Over, Under, Both };

/// Energy-decay budget of a waveguide-coupled cavity. For Regime::Both the two
/// branches cannot be told apart from a reflection dip: q_i holds the larger and
/// q_e the smaller value and `interchangeable` is set.
struct CouplingBudget {
  double q_loaded = 0.0;
  double r0 = 0.0;
  CouplingRegime regime = CouplingRegime::Both;
  bool interchangeable = false;
  double q_i = 0.0;
  double q_e = 0.0;
  double kappa_i_fraction = 0.0;  ///< kappa_i / kappa
  double kappa_e_fraction = 0.0;
  std::optional<double> eta_s;
  std::optional<double> eta_c;
  std::optional<double> eta_tot;
};

/// sqrt(R0) = |kappa_i - kappa_e| / kappa. Under-coupled means kappa_i > kappa_e.
CouplingBudget split_intrinsic_extrinsic(double q_loaded, double r0, CouplingRegime regime);

/// eta_c = sqrt(eta_tot / eta_s); eta_tot > eta_s throws CalibrationError.
double coupling_efficiency(double eta_tot, double eta_s);

/// F(D) = F0 / (1 + (2 D / kappa)^2).
double detuning_enhancement(double f0, Rate detuning, Rate kappa);

std::string to_string(CouplingRegime r);
CouplingRegime coupling_regime_from_string(const std::string& s);

/// A number plus where it came from ("default", "config", "derived: ...").
struct Sourced {
  double value = 0.0;
  std::string unit;
  std::string provenance;
};

struct CqedInputs {
  Sourced q_purcell;         ///< measured Q of the emitter-coupled device, for F_ideal
  Sourced q_intrinsic;       ///< for kappa and the cooperativity
  Sourced mode_volume;       ///< (lambda/n)^3
  Sourced wavelength_nm;
  Sourced tau_on_ns;
  Sourced tau_off_ns;
  Sourced gamma_ghz;
  Sourced debye_waller;
  Sourced branching_d;
  Sourced g_ghz;
  Sourced q_loaded;
  Sourced r0;
  Sourced eta_tot;
  Sourced eta_s;
  Sourced detuning_nm;
};

/// Published operating point, every entry tagged "default".
CqedInputs default_cqed_inputs();

/// Overrides entries present in `config` (strict keys) and tags them "config".
/// Accepts "contrast" as an alternative to "r0" and "tau_bulk_ns" for "tau_off_ns".
CqedInputs cqed_inputs_from_json(const Json& config);

struct CqedReport {
  CqedInputs inputs;
  double f_ideal = 0.0;
  double epsilon_zpl = 0.0;
  double f_zpl = 0.0;
  double kappa_ghz = 0.0;
  double kappa_loaded_ghz = 0.0;
  double cooperativity = 0.0;          ///< with kappa from q_intrinsic
  double cooperativity_loaded = 0.0;   ///< with kappa from q_loaded
  CouplingBudget budget;
  double detuning_ghz = 0.0;
  double f_detuned = 0.0;
  std::vector<std::string> notes;
};

CqedReport make_cqed_report(const CqedInputs& inputs);
Json to_json(const CqedReport& report);
std::string to_text(const CqedReport& report);

}  // namespace phc
