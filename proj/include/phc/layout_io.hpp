#pragma once

#include <iosfwd>
#include <string>

#include "phc/geometry.hpp"
#include "phc/json_util.hpp"

namespace phc {

inline constexpr int kLayoutSchemaVersion = 1;

enum class LayoutFormat { Json, Csv };

Json spec_to_json(const GeometrySpec& spec);
/// Strict: unknown keys and a missing/unknown "type" throw ConfigError.
GeometrySpec spec_from_json(const Json& j);

Nanobeam1DSpec nanobeam_from_json(const Json& j);
Phc2DSpec phc2d_from_json(const Json& j);

Json layout_to_json(const HoleList& holes);
HoleList layout_from_json(const Json& j);

/// JSON: schema_version, spec, outline, holes, metadata. CSV: header x_nm,y_nm,r_nm
/// and one row per hole in shortest round-trip decimal form.
std::string export_layout(const HoleList& holes, LayoutFormat format);
/// Throws IoError when the sink fails.
void export_layout(const HoleList& holes, LayoutFormat format, std::ostream& out);

HoleList import_layout_json(const std::string& text);

}  // namespace phc
