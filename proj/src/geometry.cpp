#include "phc/geometry.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <sstream>

#include "phc/error.hpp"
#include "phc/format.hpp"

namespace phc {

namespace {

[[noreturn]] void design_fail(const std::string& what) { throw DesignError(what); }

std::string num(double v) { return format_double(v); }

void validate_spacing(const Nanobeam1DSpec& spec) {
  const double min_gap = spec.a_nm * spec.taper_coeffs.front();
  if (!(2.0 * spec.r_nm < min_gap)) {
    design_fail("2r < a*min(taper_coeffs) violated: 2r = " + num(2.0 * spec.r_nm) +
                " nm, a*min(taper) = " + num(min_gap) + " nm");
  }
  if (!(2.0 * spec.r_nm < spec.w_nm)) {
    design_fail("2r < w violated: 2r = " + num(2.0 * spec.r_nm) + " nm, w = " + num(spec.w_nm) + " nm");
  }
}

void validate_spacing(const Phc2DSpec& spec) {
  if (!(2.0 * spec.r_nm < spec.a_nm)) {
    design_fail("2r < a violated: 2r = " + num(2.0 * spec.r_nm) + " nm, a = " + num(spec.a_nm) + " nm");
  }
}

void validate_shape(const Nanobeam1DSpec& spec) {
  if (!(spec.a_nm > 0.0)) design_fail("a_nm must be positive");
  if (!(spec.r_nm >= 0.0)) design_fail("r_nm must be non-negative");
  if (!(spec.w_nm > 0.0)) design_fail("w_nm must be positive");
  if (!(spec.d_nm > 0.0)) design_fail("d_nm must be positive");
  if (spec.taper_coeffs.empty()) design_fail("taper_coeffs must not be empty");
  for (std::size_t i = 0; i < spec.taper_coeffs.size(); ++i) {
    const double c = spec.taper_coeffs[i];
    if (!(c > 0.0) || c > 1.0) design_fail("taper_coeffs must lie in (0, 1], got " + num(c));
    if (i > 0 && !(c > spec.taper_coeffs[i - 1])) design_fail("taper_coeffs must be strictly increasing");
  }
  if (spec.n_mirror < 1) design_fail("n_mirror must be >= 1");
  const int per_side = static_cast<int>(spec.taper_coeffs.size()) + spec.n_mirror;
  if (spec.waveguide_coupled && (spec.holes_removed < 0 || spec.holes_removed > per_side)) {
    design_fail("holes_removed must lie in [0, " + std::to_string(per_side) + "]");
  }
}

void validate_shape(const Phc2DSpec& spec) {
  if (!(spec.a_nm > 0.0)) design_fail("a_nm must be positive");
  if (!(spec.r_nm >= 0.0)) design_fail("r_nm must be non-negative");
  if (!(spec.d_nm > 0.0)) design_fail("d_nm must be positive");
  if (!(spec.b1_nm >= 0.0)) design_fail("b1_nm must be non-negative");
  if (spec.shift_ratios.empty() || spec.shift_ratios.front() != 1.0) {
    design_fail("shift_ratios must start with 1.0");
  }
  for (std::size_t i = 1; i < spec.shift_ratios.size(); ++i) {
    if (!(spec.shift_ratios[i] < spec.shift_ratios[i - 1])) design_fail("shift_ratios must be strictly decreasing");
  }
  if (spec.n_rows < 2) design_fail("n_rows must be >= 2");
  if (spec.n_cols < static_cast<int>(spec.shift_ratios.size())) {
    design_fail("n_cols must be >= the number of shifted holes per side");
  }
}

}  // namespace

void validate(const Nanobeam1DSpec& spec) {
  validate_shape(spec);
  validate_spacing(spec);
}

void validate(const Phc2DSpec& spec) {
  validate_shape(spec);
  validate_spacing(spec);
}

std::vector<double> nanobeam_gaps(const Nanobeam1DSpec& spec) {
  std::vector<double> gaps;
  gaps.reserve(spec.taper_coeffs.size() + static_cast<std::size_t>(std::max(spec.n_mirror, 0)));
  for (double c : spec.taper_coeffs) gaps.push_back(c * spec.a_nm);
  for (int i = 0; i < spec.n_mirror; ++i) gaps.push_back(spec.a_nm);
  return gaps;
}

namespace {

HoleList build_1d(const Nanobeam1DSpec& spec) {
  const std::vector<double> gaps = nanobeam_gaps(spec);

  // Positions of the holes on the +x side, from the center outward.
  std::vector<double> xs(gaps.size());
  xs[0] = 0.5 * gaps[0];
  for (std::size_t i = 1; i < gaps.size(); ++i) xs[i] = xs[i - 1] + gaps[i];

  std::size_t keep_right = xs.size();
  if (spec.waveguide_coupled) keep_right -= static_cast<std::size_t>(spec.holes_removed);

  HoleList out;
  out.holes.reserve(xs.size() + keep_right);
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) out.holes.push_back({-*it, 0.0, spec.r_nm});
  for (std::size_t i = 0; i < keep_right; ++i) out.holes.push_back({xs[i], 0.0, spec.r_nm});

  const double half_len = xs.back() + spec.a_nm;
  out.outline = {-half_len, half_len, -0.5 * spec.w_nm, 0.5 * spec.w_nm, true, false};
  out.source = spec;
  std::ostringstream prov;
  prov << "nanobeam1d a=" << num(spec.a_nm) << "nm r=" << num(spec.r_nm) << "nm w=" << num(spec.w_nm)
       << "nm taper=" << spec.taper_coeffs.size() << " mirror=" << spec.n_mirror;
  if (spec.waveguide_coupled) prov << " waveguide-coupled(-" << spec.holes_removed << ")";
  out.provenance = prov.str();
  return out;
}

}  // namespace

HoleList generate_1d_holes(const Nanobeam1DSpec& spec) {
  validate(spec);
  return build_1d(spec);
}

std::vector<double> hole_shifts(const Phc2DSpec& spec) {
  std::vector<double> shifts;
  shifts.reserve(spec.shift_ratios.size());
  for (double ratio : spec.shift_ratios) shifts.push_back(spec.b1_nm * ratio);
  return shifts;
}

namespace {

HoleList build_2d(const Phc2DSpec& spec) {
  const double a = spec.a_nm;
  const double row_pitch = a * std::sqrt(3.0) / 2.0;
  const std::vector<double> shifts = hole_shifts(spec);

  HoleList out;
  for (int j = -spec.n_rows; j <= spec.n_rows; ++j) {
    if (j == 0) continue;
    const double y = j * row_pitch;
    const bool odd = (std::abs(j) % 2) == 1;
    // Odd rows sit at half-integer multiples of a, written as (2m+1)*a/2 so that the
    // layout is exactly mirror symmetric.
    const int m_max = odd ? spec.n_cols - 1 : spec.n_cols;
    for (int m = -spec.n_cols; m <= m_max; ++m) {
      const double x = odd ? (2 * m + 1) * a / 2.0 : m * a;
      double y_hole = y;
      if (std::abs(j) == 1) {
        const int k = odd ? (m >= 0 ? m : -m - 1) : std::abs(m);
        if (k < static_cast<int>(shifts.size())) y_hole = y + (j > 0 ? shifts[k] : -shifts[k]);
      }
      out.holes.push_back({x, y_hole, spec.r_nm});
    }
  }

  const double half_w = spec.n_cols * a + a;
  const double half_h = spec.n_rows * row_pitch + a;
  out.outline = {-half_w, half_w, -half_h, half_h, true, true};
  out.source = spec;
  std::ostringstream prov;
  prov << "phc2d a=" << num(a) << "nm r=" << num(spec.r_nm) << "nm b1=" << num(spec.b1_nm)
       << "nm rows=" << spec.n_rows << " cols=" << spec.n_cols;
  out.provenance = prov.str();
  return out;
}

}  // namespace

HoleList generate_2d_holes(const Phc2DSpec& spec) {
  validate(spec);
  return build_2d(spec);
}

HoleList generate_layout(const GeometrySpec& spec) {
  if (const auto* s1 = std::get_if<Nanobeam1DSpec>(&spec)) return generate_1d_holes(*s1);
  if (const auto* s2 = std::get_if<Phc2DSpec>(&spec)) return generate_2d_holes(*s2);
  throw DesignError("empty geometry spec");
}

HoleList draft_layout(const GeometrySpec& spec) {
  if (const auto* s1 = std::get_if<Nanobeam1DSpec>(&spec)) {
    validate_shape(*s1);
    return build_1d(*s1);
  }
  if (const auto* s2 = std::get_if<Phc2DSpec>(&spec)) {
    validate_shape(*s2);
    return build_2d(*s2);
  }
  throw DesignError("empty geometry spec");
}

std::vector<DrcViolation> design_rule_check(const HoleList& list, Nanometers min_gap,
                                            Nanometers min_clearance) {
  const auto& holes = list.holes;
  std::vector<DrcViolation> out;

  double r_max = 0.0;
  for (const Hole& h : holes) r_max = std::max(r_max, h.r_nm);

  // Sweep in x: pairs further apart in x than 2*r_max + min_gap cannot violate.
  std::vector<std::size_t> order(holes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return holes[l].x_nm < holes[r].x_nm || (holes[l].x_nm == holes[r].x_nm && l < r);
  });
  const double reach = 2.0 * r_max + std::max(min_gap.value, 0.0);
  for (std::size_t p = 0; p < order.size(); ++p) {
    const Hole& h1 = holes[order[p]];
    for (std::size_t q = p + 1; q < order.size(); ++q) {
      const Hole& h2 = holes[order[q]];
      if (h2.x_nm - h1.x_nm > reach) break;
      const double gap = std::hypot(h2.x_nm - h1.x_nm, h2.y_nm - h1.y_nm) - h1.r_nm - h2.r_nm;
      if (gap < min_gap.value) {
        const auto kind = gap <= 0.0 ? DrcViolation::Kind::HoleOverlap : DrcViolation::Kind::HoleGap;
        out.push_back({kind, std::min(order[p], order[q]), std::max(order[p], order[q]), gap});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const DrcViolation& l, const DrcViolation& r) {
    return l.first < r.first || (l.first == r.first && l.second < r.second);
  });

  const Outline& o = list.outline;
  for (std::size_t i = 0; i < holes.size(); ++i) {
    const Hole& h = holes[i];
    double clearance = std::numeric_limits<double>::infinity();
    if (!o.open_x) clearance = std::min({clearance, h.x_nm - h.r_nm - o.x_min_nm, o.x_max_nm - h.x_nm - h.r_nm});
    if (!o.open_y) clearance = std::min({clearance, h.y_nm - h.r_nm - o.y_min_nm, o.y_max_nm - h.y_nm - h.r_nm});
    if (clearance < min_clearance.value) {
      out.push_back({DrcViolation::Kind::OutlineClearance, i, i, clearance});
    }
  }
  return out;
}

std::string to_string(DrcViolation::Kind kind) {
  switch (kind) {
    case DrcViolation::Kind::HoleGap: return "gap";
    case DrcViolation::Kind::HoleOverlap: return "overlap";
    case DrcViolation::Kind::OutlineClearance: return "clearance";
  }
  return "unknown";
}

}  // namespace phc
