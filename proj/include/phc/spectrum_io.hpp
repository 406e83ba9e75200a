#pragma once

#include <string>

#include "phc/signal.hpp"

namespace phc {

/// Spectrum CSV: "# axis_kind: nm|GHz", header "axis,value", one sample per row.
std::string spectrum_to_csv(const Spectrum& s);
/// Throws IoError on malformed text and DomainError when the data violate Spectrum's invariants.
Spectrum spectrum_from_csv(const std::string& text);

/// Histogram CSV "t_ns,counts" with uniformly spaced bins.
std::string histogram_to_csv(const TimeTrace& h);
TimeTrace histogram_from_csv(const std::string& text);

std::string read_text_file(const std::string& path);
/// Truncates and writes; throws IoError.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace phc
