#pragma once

// Unit-bearing value types shared across the toolkit.
//
// Conventions: vacuum wavelength in nm, optical frequency in THz, decay and
// coupling rates in GHz, times in ns (fs inside the field solver).

namespace phc {

/// Speed of light in vacuum, m/s (exact SI value).
inline constexpr double kSpeedOfLight = 299792458.0;
/// Same constant expressed in nm * THz.
inline constexpr double kSpeedOfLightNmTHz = 299792.458;
/// Same constant expressed in nm / fs.
inline constexpr double kSpeedOfLightNmPerFs = 299.792458;

inline constexpr double kDiamondIndex = 2.41;

struct Wavelength {
  double nm;
};

struct Frequency {
  double thz;
};

/// Linewidths, decay rates and couplings.
struct Rate {
  double ghz;
  constexpr double mhz() const { return ghz * 1e3; }
};

/// A length or wavelength interval (not a vacuum wavelength).
struct Nanometers {
  double value;
};

struct Nanoseconds {
  double value;
};

struct QualityFactor {
  double value;
};

/// Mode volume in units of (lambda / n_ref)^3.
struct ModeVolume {
  double value;
  double n_ref = kDiamondIndex;
};

Frequency wavelength_to_frequency(Wavelength wavelength);
Wavelength frequency_to_wavelength(Frequency frequency);

/// Energy decay rate kappa = nu0 / Q.
Rate q_to_kappa(QualityFactor q, Wavelength center);

/// Q = lambda0 / FWHM.
QualityFactor fwhm_to_q(Wavelength center, Nanometers fwhm);

/// Frequency width corresponding to a small wavelength interval around center (c * dl / l^2).
Rate wavelength_span_to_rate(Wavelength center, Nanometers span);

namespace literals {
constexpr Wavelength operator""_nm(long double v) { return {static_cast<double>(v)}; }
constexpr Wavelength operator""_nm(unsigned long long v) { return {static_cast<double>(v)}; }
constexpr Rate operator""_GHz(long double v) { return {static_cast<double>(v)}; }
constexpr Rate operator""_GHz(unsigned long long v) { return {static_cast<double>(v)}; }
}  // namespace literals

}  // namespace phc
