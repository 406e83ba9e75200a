#include "phc/units.hpp"

#include <cmath>
#include <string>

#include "phc/error.hpp"

namespace phc {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive and finite, got " + std::to_string(v));
  }
}

}  // namespace

Frequency wavelength_to_frequency(Wavelength wavelength) {
  require_positive(wavelength.nm, "wavelength");
  return {kSpeedOfLightNmTHz / wavelength.nm};
}

Wavelength frequency_to_wavelength(Frequency frequency) {
  require_positive(frequency.thz, "frequency");
  return {kSpeedOfLightNmTHz / frequency.thz};
}

Rate q_to_kappa(QualityFactor q, Wavelength center) {
  require_positive(q.value, "quality factor");
  const Frequency nu = wavelength_to_frequency(center);
  return {nu.thz * 1e3 / q.value};
}

QualityFactor fwhm_to_q(Wavelength center, Nanometers fwhm) {
  require_positive(center.nm, "center wavelength");
  require_positive(fwhm.value, "linewidth");
  if (fwhm.value >= center.nm) {
    throw DomainError("linewidth must be smaller than the center wavelength");
  }
  return {center.nm / fwhm.value};
}

Rate wavelength_span_to_rate(Wavelength center, Nanometers span) {
  require_positive(center.nm, "center wavelength");
  return {kSpeedOfLightNmTHz * 1e3 * span.value / (center.nm * center.nm)};
}

}  // namespace phc
