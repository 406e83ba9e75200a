#include "phc/layout_io.hpp"

#include <ostream>

#include "phc/error.hpp"
#include "phc/format.hpp"

namespace phc {

void throw_field_error(std::string_view context, std::string_view key) {
  throw ConfigError(std::string(context) + ": field '" + std::string(key) + "' has the wrong type");
}

void throw_missing_field(std::string_view context, std::string_view key) {
  throw ConfigError(std::string(context) + ": missing required field '" + std::string(key) + "'");
}

void require_known_keys(const Json& obj, std::initializer_list<std::string_view> allowed,
                        std::string_view context) {
  if (!obj.is_object()) throw ConfigError(std::string(context) + ": expected a JSON object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (std::string_view k : allowed) known = known || (k == item.key());
    if (!known) throw ConfigError(std::string(context) + ": unknown field '" + item.key() + "'");
  }
}

Json spec_to_json(const GeometrySpec& spec) {
  if (const auto* nb = std::get_if<Nanobeam1DSpec>(&spec)) {
    return Json{{"type", "nanobeam1d"},
                {"a_nm", nb->a_nm},
                {"r_nm", nb->r_nm},
                {"w_nm", nb->w_nm},
                {"d_nm", nb->d_nm},
                {"taper_coeffs", nb->taper_coeffs},
                {"n_mirror", nb->n_mirror},
                {"waveguide_coupled", nb->waveguide_coupled},
                {"holes_removed", nb->holes_removed}};
  }
  if (const auto* p = std::get_if<Phc2DSpec>(&spec)) {
    return Json{{"type", "phc2d"},           {"a_nm", p->a_nm},
                {"r_nm", p->r_nm},           {"d_nm", p->d_nm},
                {"b1_nm", p->b1_nm},         {"shift_ratios", p->shift_ratios},
                {"n_rows", p->n_rows},       {"n_cols", p->n_cols}};
  }
  return nullptr;
}

Nanobeam1DSpec nanobeam_from_json(const Json& j) {
  constexpr std::string_view ctx = "geometry(nanobeam1d)";
  require_known_keys(j, {"type", "a_nm", "r_nm", "w_nm", "d_nm", "taper_coeffs", "n_mirror",
                         "waveguide_coupled", "holes_removed"},
                     ctx);
  Nanobeam1DSpec s;
  s.a_nm = get_or(j, "a_nm", s.a_nm, ctx);
  s.r_nm = get_or(j, "r_nm", s.r_nm, ctx);
  s.w_nm = get_or(j, "w_nm", s.w_nm, ctx);
  s.d_nm = get_or(j, "d_nm", s.d_nm, ctx);
  s.taper_coeffs = get_or(j, "taper_coeffs", s.taper_coeffs, ctx);
  s.n_mirror = get_or(j, "n_mirror", s.n_mirror, ctx);
  s.waveguide_coupled = get_or(j, "waveguide_coupled", s.waveguide_coupled, ctx);
  s.holes_removed = get_or(j, "holes_removed", s.holes_removed, ctx);
  return s;
}

Phc2DSpec phc2d_from_json(const Json& j) {
  constexpr std::string_view ctx = "geometry(phc2d)";
  require_known_keys(j, {"type", "a_nm", "r_nm", "d_nm", "b1_nm", "shift_ratios", "n_rows", "n_cols"}, ctx);
  Phc2DSpec s;
  s.a_nm = get_or(j, "a_nm", s.a_nm, ctx);
  s.r_nm = get_or(j, "r_nm", s.r_nm, ctx);
  s.d_nm = get_or(j, "d_nm", s.d_nm, ctx);
  s.b1_nm = get_or(j, "b1_nm", s.b1_nm, ctx);
  s.shift_ratios = get_or(j, "shift_ratios", s.shift_ratios, ctx);
  s.n_rows = get_or(j, "n_rows", s.n_rows, ctx);
  s.n_cols = get_or(j, "n_cols", s.n_cols, ctx);
  return s;
}

GeometrySpec spec_from_json(const Json& j) {
  if (j.is_null()) return std::monostate{};
  if (!j.is_object()) throw ConfigError("geometry: expected a JSON object");
  const auto type = get_required<std::string>(j, "type", "geometry");
  if (type == "nanobeam1d") return nanobeam_from_json(j);
  if (type == "phc2d") return phc2d_from_json(j);
  throw ConfigError("geometry: unknown type '" + type + "' (expected nanobeam1d or phc2d)");
}

Json layout_to_json(const HoleList& list) {
  Json holes = Json::array();
  for (const Hole& h : list.holes) holes.push_back(Json::array({h.x_nm, h.y_nm, h.r_nm}));
  const Outline& o = list.outline;
  return Json{{"schema_version", kLayoutSchemaVersion},
              {"spec", spec_to_json(list.source)},
              {"outline",
               {{"x_min_nm", o.x_min_nm},
                {"x_max_nm", o.x_max_nm},
                {"y_min_nm", o.y_min_nm},
                {"y_max_nm", o.y_max_nm},
                {"open_x", o.open_x},
                {"open_y", o.open_y}}},
              {"holes", std::move(holes)},
              {"metadata", {{"provenance", list.provenance}, {"warnings", list.warnings}}}};
}

HoleList layout_from_json(const Json& j) {
  constexpr std::string_view ctx = "layout";
  require_known_keys(j, {"schema_version", "spec", "outline", "holes", "metadata"}, ctx);
  const int version = get_required<int>(j, "schema_version", ctx);
  if (version != kLayoutSchemaVersion) {
    throw ConfigError("layout: unsupported schema_version " + std::to_string(version));
  }
  HoleList out;
  out.source = spec_from_json(j.value("spec", Json()));

  const Json& o = j.at("outline");
  require_known_keys(o, {"x_min_nm", "x_max_nm", "y_min_nm", "y_max_nm", "open_x", "open_y"}, "layout.outline");
  out.outline.x_min_nm = get_required<double>(o, "x_min_nm", "layout.outline");
  out.outline.x_max_nm = get_required<double>(o, "x_max_nm", "layout.outline");
  out.outline.y_min_nm = get_required<double>(o, "y_min_nm", "layout.outline");
  out.outline.y_max_nm = get_required<double>(o, "y_max_nm", "layout.outline");
  out.outline.open_x = get_or(o, "open_x", false, "layout.outline");
  out.outline.open_y = get_or(o, "open_y", false, "layout.outline");

  for (const Json& h : j.at("holes")) {
    if (!h.is_array() || h.size() != 3) throw ConfigError("layout.holes: each hole must be [x_nm, y_nm, r_nm]");
    out.holes.push_back({h[0].get<double>(), h[1].get<double>(), h[2].get<double>()});
  }
  if (const auto it = j.find("metadata"); it != j.end()) {
    require_known_keys(*it, {"provenance", "warnings"}, "layout.metadata");
    out.provenance = get_or<std::string>(*it, "provenance", "", "layout.metadata");
    out.warnings = get_or<std::vector<std::string>>(*it, "warnings", {}, "layout.metadata");
  }
  return out;
}

std::string export_layout(const HoleList& holes, LayoutFormat format) {
  if (format == LayoutFormat::Json) return layout_to_json(holes).dump(2) + "\n";
  std::string out = "x_nm,y_nm,r_nm\n";
  for (const Hole& h : holes.holes) {
    out += format_double(h.x_nm);
    out += ',';
    out += format_double(h.y_nm);
    out += ',';
    out += format_double(h.r_nm);
    out += '\n';
  }
  return out;
}

void export_layout(const HoleList& holes, LayoutFormat format, std::ostream& out) {
  const std::string bytes = export_layout(holes, format);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("failed to write layout");
}

HoleList import_layout_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("layout: malformed JSON: ") + e.what());
  }
  return layout_from_json(j);
}

}  // namespace phc
