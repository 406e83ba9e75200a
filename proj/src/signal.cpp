#include "phc/signal.hpp"

#include <algorithm>
#include <cmath>

#include "phc/error.hpp"

namespace phc {

void validate(const Spectrum& s) {
  if (s.axis.size() != s.counts.size()) throw DomainError("spectrum axis and counts differ in length");
  for (std::size_t i = 0; i < s.axis.size(); ++i) {
    if (!std::isfinite(s.axis[i]) || !std::isfinite(s.counts[i])) throw DomainError("spectrum has non-finite values");
    if (s.counts[i] < 0.0) throw DomainError("spectrum counts must be non-negative");
    if (i > 0 && !(s.axis[i] > s.axis[i - 1])) throw DomainError("spectrum axis must be strictly increasing");
  }
}

TimeTrace TimeTrace::tail(std::size_t first) const {
  TimeTrace out{unit, time(first), dt, {}};
  if (first < values.size()) out.values.assign(values.begin() + static_cast<std::ptrdiff_t>(first), values.end());
  return out;
}

double thz_per_inverse_unit(TimeUnit unit) {
  return unit == TimeUnit::Femtoseconds ? 1e3 : 1e-3;
}

}  // namespace phc
