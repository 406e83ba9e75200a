#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "phc/error.hpp"
#include "phc/geometry.hpp"
#include "phc/layout_io.hpp"

using namespace phc;
using doctest::Approx;

namespace {

std::vector<double> read_golden_gaps() {
  std::ifstream in(std::string(PHC_GOLDEN_DIR) + "/taper_gaps_a269.csv");
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  std::vector<double> gaps;
  while (std::getline(in, line)) gaps.push_back(std::stod(line.substr(line.find(',') + 1)));
  return gaps;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("taper gaps match the golden file") {
  const auto golden = read_golden_gaps();
  const auto gaps = nanobeam_gaps(Nanobeam1DSpec{});
  REQUIRE(gaps.size() == golden.size());
  for (std::size_t i = 0; i < gaps.size(); ++i) CHECK(gaps[i] == Approx(golden[i]).epsilon(1e-12));
}

TEST_CASE("1D holes are mirror symmetric and spaced by the gaps") {
  const Nanobeam1DSpec spec;
  const HoleList h = generate_1d_holes(spec);
  const auto gaps = nanobeam_gaps(spec);
  REQUIRE(h.holes.size() == 2 * gaps.size());
  const std::size_t half = gaps.size();
  CHECK(h.holes[half].x_nm == Approx(0.5 * gaps[0]));
  for (std::size_t i = 0; i < half; ++i) {
    CHECK(h.holes[half - 1 - i].x_nm == -h.holes[half + i].x_nm);
    if (i > 0) CHECK(h.holes[half + i].x_nm - h.holes[half + i - 1].x_nm == Approx(gaps[i]));
  }
  CHECK(h.outline.open_x);
  CHECK_FALSE(h.outline.open_y);
  CHECK(h.outline.height() == Approx(spec.w_nm));
}

TEST_CASE("waveguide coupling removes holes on one side") {
  Nanobeam1DSpec spec;
  spec.waveguide_coupled = true;
  spec.holes_removed = 9;
  const HoleList h = generate_1d_holes(spec);
  CHECK(h.holes.size() == 32 - 9);
  spec.holes_removed = 17;
  CHECK_THROWS_AS(generate_1d_holes(spec), DesignError);
}

TEST_CASE("design constraints") {
  Nanobeam1DSpec s;
  s.r_nm = 120.0;
  CHECK_THROWS_AS(validate(s), DesignError);
  s = {};
  s.taper_coeffs = {0.9, 0.85};
  CHECK_THROWS_AS(validate(s), DesignError);
  Phc2DSpec p;
  p.shift_ratios = {1.0, 1.0};
  CHECK_THROWS_AS(validate(p), DesignError);
  p = {};
  p.r_nm = 130.0;
  CHECK_THROWS_AS(validate(p), DesignError);
  CHECK_THROWS_AS(generate_layout(GeometrySpec{}), DesignError);
}

TEST_CASE("2D shifts and lattice") {
  const Phc2DSpec spec;
  const auto shifts = hole_shifts(spec);
  REQUIRE(shifts.size() == 4);
  CHECK(shifts[0] == Approx(10.1));
  CHECK(shifts[1] == Approx(7.575));
  CHECK(shifts[3] == Approx(2.525));

  const HoleList h = generate_2d_holes(spec);
  const double pitch = spec.a_nm * std::sqrt(3.0) / 2.0;
  int shifted = 0;
  for (const Hole& hole : h.holes) {
    const double row = hole.y_nm / pitch;
    const double nearest = std::round(row);
    CHECK(nearest != 0.0);
    if (std::abs(row - nearest) > 1e-9) {
      ++shifted;
      CHECK(std::abs(nearest) == 1.0);
      // Shifted away from the defect axis.
      CHECK(std::abs(hole.y_nm) > pitch);
    }
  }
  CHECK(shifted == 16);
  // Mirror symmetry about both axes.
  for (const Hole& a : h.holes) {
    bool found = false;
    for (const Hole& b : h.holes) {
      if (std::abs(a.x_nm + b.x_nm) < 1e-9 && std::abs(a.y_nm + b.y_nm) < 1e-9) found = true;
    }
    CHECK(found);
  }
}

TEST_CASE("design rule check") {
  const HoleList ok = generate_1d_holes(Nanobeam1DSpec{});
  CHECK(design_rule_check(ok, {20.0}, {20.0}).empty());

  HoleList h;
  h.outline = {-500, 500, -100, 100, false, false};
  h.holes = {{0, 0, 50}, {90, 0, 50}, {300, 0, 50}, {460, 0, 30}};
  const auto v = design_rule_check(h, {20.0}, {20.0});
  REQUIRE(v.size() == 2);
  CHECK(v[0].kind == DrcViolation::Kind::HoleOverlap);
  CHECK(v[0].first == 0);
  CHECK(v[0].second == 1);
  CHECK(v[0].value_nm == Approx(-10.0));
  CHECK(v[1].kind == DrcViolation::Kind::OutlineClearance);
  CHECK(v[1].first == 3);
  CHECK(v[1].value_nm == Approx(10.0));

  Nanobeam1DSpec bad;
  bad.a_nm = 184.0;
  bad.r_nm = 100.0;
  bad.w_nm = 500.0;
  CHECK_THROWS_AS(generate_layout(bad), DesignError);
  CHECK_FALSE(design_rule_check(draft_layout(bad), {20.0}, {20.0}).empty());
}

TEST_CASE("layout round trip") {
  for (const GeometrySpec& spec : {GeometrySpec{Nanobeam1DSpec{}}, GeometrySpec{Phc2DSpec{}}}) {
    const HoleList h = generate_layout(spec);
    const HoleList back = import_layout_json(export_layout(h, LayoutFormat::Json));
    CHECK(back.holes == h.holes);
    CHECK(back.outline == h.outline);
    CHECK(back.source == h.source);
    const std::string csv = export_layout(h, LayoutFormat::Csv);
    CHECK(csv.rfind("x_nm,y_nm,r_nm\n", 0) == 0);
  }
  CHECK_THROWS_AS(spec_from_json(Json{{"type", "nanobeam1d"}, {"a_mn", 200}}), ConfigError);
  CHECK_THROWS_AS(spec_from_json(Json{{"type", "ring"}}), ConfigError);
  CHECK_THROWS_AS(import_layout_json("{not json"), std::exception);
}

}  // TEST_SUITE
