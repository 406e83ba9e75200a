#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phc/json_util.hpp"
#include "phc/least_squares.hpp"
#include "phc/signal.hpp"
#include "phc/units.hpp"

namespace phc {

struct FitParameter {
  std::string name;
  double value = 0.0;
  double uncertainty = 0.0;  ///< 1 sigma; +inf when the data cannot constrain it
};

struct FitResult {
  std::string model;
  std::vector<FitParameter> params;
  std::map<std::string, double> derived;  ///< Q, contrast, ...
  double residual_rms = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<std::string> notes;

  /// Throws std::out_of_range for an unknown name.
  double value(std::string_view name) const;
  double sigma(std::string_view name) const;
};

Json to_json(const FitResult& fit);

/// Optional starting point; absent entries are estimated from the data.
struct PeakGuess {
  std::optional<double> center;
  std::optional<double> width;
  std::optional<double> amplitude;
  std::optional<double> offset;
};

/// L(x) = B + A (G/2)^2 / ((x - x0)^2 + (G/2)^2). Parameters: center, fwhm,
/// amplitude, offset; derived Q = center / fwhm (meaningful on absolute axes).
/// converged is false when LM fails or the peak amplitude is not significant.
FitResult fit_lorentzian_peak(const Spectrum& s, const PeakGuess& guess = {}, const LmOptions& lm = {});

/// R(nu) = B (1 - (1 - R0) (k/2)^2 / ((nu - nu0)^2 + (k/2)^2)). Parameters: center,
/// kappa, r0, baseline; derived q_loaded = center / kappa and contrast = 1 - r0.
/// A dip with no significant depth (r0 ~ 1) is reported unconverged.
FitResult fit_reflection_dip(const Spectrum& s, const PeakGuess& guess = {}, const LmOptions& lm = {});

/// Noise-free generators used by the synthetic tests and the bundled datasets.
double lorentzian_peak(double x, double center, double fwhm, double amplitude, double offset);
double reflection_dip(double nu, double center, double kappa, double r0, double baseline);

struct Resonance {
  double frequency_thz = 0.0;
  double q = 0.0;           ///< pi f / decay rate (field amplitude convention)
  double decay_rate = 0.0;  ///< field amplitude decay, 1 / time unit of the trace
  double amplitude = 0.0;   ///< |complex amplitude| at the first sample
  double phase = 0.0;
  bool lossless = false;    ///< decay not resolved; q capped at kLosslessQ
};

inline constexpr double kLosslessQ = 1e9;

struct HarmonicInversionOptions {
  int max_samples = 1500;             ///< after filtering and decimation
  double singular_value_cutoff = 1e-9;  ///< relative to the largest singular value
};

struct HarmonicInversion {
  std::vector<Resonance> modes;  ///< sorted by amplitude, largest first
  std::vector<std::string> warnings;
  int model_order = 0;
  int decimation = 1;  ///< samples per filtered output
};

/// Fits sum_k A_k cos(2 pi f_k t + phi_k) exp(-pi f_k t / Q_k) inside [lo, hi]: the
/// band is mixed to baseband, FIR low-passed and decimated, then a matrix pencil
/// extracts the poles. Amplitude and phase refer to the first sample. Fewer than
/// max_modes in band yields a warning. Throws DomainError for fewer than 200 samples.
HarmonicInversion harmonic_inversion(const TimeTrace& trace, Frequency lo, Frequency hi, int max_modes,
                                     const HarmonicInversionOptions& options = {});

/// A exp(-t / tau) + B fitted on t >= t_start (default: histogram peak + 2 bins),
/// Poisson weights 1 / max(counts, 1). Parameters: tau, amplitude, offset.
FitResult fit_exponential_lifetime(const TimeTrace& histogram, std::optional<double> t_start = std::nullopt,
                                   const LmOptions& lm = {});

/// g2(tau) = norm (1 - (1 - g2_0) exp(-|tau| / tau_c)), Poisson weighted.
/// Parameters: g2_0, tau_c, norm; derived single_emitter = (g2_0 + sigma < 0.5).
FitResult fit_g2(const TimeTrace& histogram, const LmOptions& lm = {});

struct PleStability {
  double mean_linewidth_mhz = 0.0;
  double max_drift_mhz = 0.0;
  double drift_per_linewidth = 0.0;
  std::vector<double> centers_mhz;
  std::vector<double> linewidths_mhz;
  int used = 0;
  int excluded = 0;
};

/// Each scan (GHz axis) is normalized to its own peak and fitted as a Lorentzian;
/// unconverged scans are excluded and counted. Throws DomainError when fewer than
/// two scans are usable.
PleStability ple_stability(const std::vector<Spectrum>& scans);

enum class Verdict { No, Yes, Indeterminate };

struct HysteresisCheck {
  double q_forward = 0.0;
  double q_backward = 0.0;
  double center_shift = 0.0;  ///< backward - forward, axis units
  double mean_fwhm = 0.0;
  Verdict thermo_optic = Verdict::Indeterminate;
};

/// Flags thermo-optic distortion when the Q values differ by more than
/// `q_threshold` of their mean or the centers differ by more than the mean FWHM.
HysteresisCheck hysteresis_check(const Spectrum& forward, const Spectrum& backward, double q_threshold = 0.2);

std::string to_string(Verdict v);

}  // namespace phc
