#pragma once

#include <cstddef>
#include <vector>

namespace phc {

enum class AxisKind { Wavelength_nm, Frequency_GHz };

/// Sampled intensity against a strictly increasing axis.
struct Spectrum {
  AxisKind kind = AxisKind::Wavelength_nm;
  std::vector<double> axis;
  std::vector<double> counts;

  std::size_t size() const { return axis.size(); }
};

/// Throws DomainError unless the axis is strictly increasing, lengths match and counts >= 0.
void validate(const Spectrum& s);

enum class TimeUnit { Femtoseconds, Nanoseconds };

/// Uniformly sampled signal: sample k is at t0 + k * dt.
struct TimeTrace {
  TimeUnit unit = TimeUnit::Nanoseconds;
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
  /// Samples from index `first` onward.
  TimeTrace tail(std::size_t first) const;
};

/// THz per (1 / time unit): 1/fs = 1000 THz, 1/ns = 1e-3 THz.
double thz_per_inverse_unit(TimeUnit unit);

}  // namespace phc
