#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "phc/units.hpp"

namespace phc {

/// Tapered-lattice nanobeam cavity. The central unit cell straddles x = 0, so the
/// two innermost holes sit at +-a1/2; outward gaps are a1..aN then n_mirror gaps of a.
struct Nanobeam1DSpec {
  double a_nm = 269.0;
  double r_nm = 65.0;
  double w_nm = 370.0;
  double d_nm = 160.0;
  std::vector<double> taper_coeffs{0.84, 0.844, 0.858, 0.88, 0.911, 0.951};
  int n_mirror = 10;
  bool waveguide_coupled = false;
  int holes_removed = 9;

  friend bool operator==(const Nanobeam1DSpec&, const Nanobeam1DSpec&) = default;
};

/// Width-modulated W1 line-defect cavity in a triangular lattice. Row 0 is removed;
/// in rows +-1 the shift_ratios.size() holes nearest the center on each side are
/// pushed away from the defect axis by b1 * shift_ratios[k].
struct Phc2DSpec {
  double a_nm = 252.0;
  double r_nm = 65.0;
  double d_nm = 160.0;
  double b1_nm = 10.1;
  std::vector<double> shift_ratios{1.0, 0.75, 0.5, 0.25};
  int n_rows = 7;  ///< hole rows on each side of the defect
  int n_cols = 16; ///< lattice extent: |x| <= n_cols * a

  friend bool operator==(const Phc2DSpec&, const Phc2DSpec&) = default;
};

using GeometrySpec = std::variant<std::monostate, Nanobeam1DSpec, Phc2DSpec>;

struct Hole {
  double x_nm;
  double y_nm;
  double r_nm;

  friend bool operator==(const Hole&, const Hole&) = default;
};

/// Material region hosting the holes. An "open" axis means the host continues
/// past the bounds (waveguide or slab running into the simulation boundary).
struct Outline {
  double x_min_nm = 0.0;
  double x_max_nm = 0.0;
  double y_min_nm = 0.0;
  double y_max_nm = 0.0;
  bool open_x = false;
  bool open_y = false;

  double width() const { return x_max_nm - x_min_nm; }
  double height() const { return y_max_nm - y_min_nm; }

  friend bool operator==(const Outline&, const Outline&) = default;
};

struct HoleList {
  std::vector<Hole> holes;
  Outline outline;
  GeometrySpec source;
  std::string provenance;
  std::vector<std::string> warnings;

  friend bool operator==(const HoleList&, const HoleList&) = default;
};

/// Throws DesignError naming the violated constraint.
void validate(const Nanobeam1DSpec& spec);
void validate(const Phc2DSpec& spec);

/// Gap sequence from the center outward: taper_coeffs * a, then n_mirror copies of a.
std::vector<double> nanobeam_gaps(const Nanobeam1DSpec& spec);

HoleList generate_1d_holes(const Nanobeam1DSpec& spec);
HoleList generate_2d_holes(const Phc2DSpec& spec);

HoleList generate_layout(const GeometrySpec& spec);

/// Builds the layout while skipping the hole-spacing invariants (2r < ...), so the
/// design rule check can list the resulting overlaps. Other constraints still throw.
HoleList draft_layout(const GeometrySpec& spec);

/// Shift applied to the k-th hole (k = 0 nearest the center) in the rows next to the defect.
std::vector<double> hole_shifts(const Phc2DSpec& spec);

struct DrcViolation {
  enum class Kind { HoleGap, HoleOverlap, OutlineClearance };
  Kind kind;
  std::size_t first;
  std::size_t second;  ///< equals first for clearance violations
  double value_nm;     ///< edge-to-edge gap or clearance
};

/// Every hole pair with edge gap < min_gap and every hole with clearance to a
/// closed outline edge < min_clearance. Pairs are reported with first < second,
/// sorted by (first, second); clearance entries follow, sorted by hole index.
std::vector<DrcViolation> design_rule_check(const HoleList& holes, Nanometers min_gap,
                                            Nanometers min_clearance);

std::string to_string(DrcViolation::Kind kind);

}  // namespace phc
