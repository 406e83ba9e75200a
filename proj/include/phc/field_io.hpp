#pragma once

#include <iosfwd>
#include <string>

#include "phc/fdtd2d.hpp"
#include "phc/signal.hpp"

namespace phc {

/// FSNP container: "FSNP", u32 nx, u32 ny, u32 component (little endian), then
/// nx * ny little-endian f64 in row-major order.
void write_raster(std::ostream& out, const Raster& values, Component component);
FieldSnapshot read_raster(std::istream& in);

void write_snapshot(const std::string& path, const FieldSnapshot& snapshot);
void write_eps(const std::string& path, const Grid2D& grid);
FieldSnapshot read_snapshot(const std::string& path);

/// CSV "step,time_fs,value"; step counts from 0 at the first sample.
std::string trace_to_csv(const TimeTrace& trace);
TimeTrace trace_from_csv(const std::string& text);

}  // namespace phc
