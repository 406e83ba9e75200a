#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/LU>

#include "phc/error.hpp"
#include "phc/wave1d.hpp"

using namespace phc;
using doctest::Approx;

namespace {

// Quarter-wave mirror on a substrate: R = ((n0 - Y) / (n0 + Y))^2, Y = (nH/nL)^2N ns.
double quarter_wave_reflectance(double n0, double nh, double nl, double ns, int pairs) {
  const double y = std::pow(nh / nl, 2 * pairs) * ns;
  return std::pow((n0 - y) / (n0 + y), 2);
}

LayerStack quarter_wave_stack(double nh, double nl, double lambda0, int pairs, double n0, double ns) {
  LayerStack s;
  for (int i = 0; i < pairs; ++i) {
    s.layers.push_back({nh, lambda0 / (4 * nh)});
    s.layers.push_back({nl, lambda0 / (4 * nl)});
  }
  s.ambient_n = n0;
  s.exit_n = ns;
  return s;
}

}  // namespace

TEST_SUITE("wave1d") {

TEST_CASE("single quarter-wave layer") {
  LayerStack s;
  s.layers = {{1.5, 600.0 / (4 * 1.5)}};
  s.exit_n = 2.0;
  const auto r = transfer_matrix(s, {600.0});
  const double expected = std::pow((1.0 * 2.0 - 1.5 * 1.5) / (1.0 * 2.0 + 1.5 * 1.5), 2);
  CHECK(r.reflectance == Approx(expected).epsilon(1e-12));
  CHECK(r.reflectance + r.transmittance == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("half-wave layer is absent") {
  LayerStack s;
  s.layers = {{2.4, 700.0 / (2 * 2.4)}};
  s.exit_n = 1.5;
  const double bare = std::pow((1.0 - 1.5) / (1.0 + 1.5), 2);
  CHECK(transfer_matrix(s, {700.0}).reflectance == Approx(bare).epsilon(1e-12));
}

TEST_CASE("quarter-wave mirror reflectance") {
  for (int pairs : {1, 3, 6}) {
    const LayerStack s = quarter_wave_stack(2.4, 1.45, 737.0, pairs, 1.0, 1.5);
    const auto r = transfer_matrix(s, {737.0});
    CHECK(r.reflectance == Approx(quarter_wave_reflectance(1.0, 2.4, 1.45, 1.5, pairs)).epsilon(1e-12));
  }
}

TEST_CASE("energy conservation and unit determinant") {
  const LayerStack s = quarter_wave_stack(2.0, 1.0, 737.0, 4, 1.0, 2.0);
  for (double wl = 500.0; wl < 1000.0; wl += 37.0) {
    const auto r = transfer_matrix(s, {wl});
    CHECK(r.reflectance + r.transmittance == Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(r.matrix.determinant() - std::complex<double>(1.0, 0.0)) < 1e-12);
  }
}

TEST_CASE("stop band of a quarter-wave stack") {
  const double nh = 2.4;
  const double nl = 1.45;
  const std::vector<Layer> cell = {{nh, 737.0 / (4 * nh)}, {nl, 737.0 / (4 * nl)}};
  // Edges at f0 (1 +- (2/pi) asin((nh - nl) / (nh + nl))).
  const double half = 2.0 / std::numbers::pi * std::asin((nh - nl) / (nh + nl));
  const double lo = 737.0 / (1.0 + half);
  const double hi = 737.0 / (1.0 - half);
  const auto edges = bragg_band_edges(cell, {600.0}, {950.0}, 2000);
  const auto gaps = stop_bands(edges, {600.0}, {950.0}, false);
  REQUIRE(gaps.size() == 1);
  CHECK(gaps[0].first == Approx(lo).epsilon(1e-8));
  CHECK(gaps[0].second == Approx(hi).epsilon(1e-8));
  CHECK(std::abs(bloch_trace(cell, {737.0})) > 2.0);
  CHECK_THROWS_AS(bragg_band_edges(cell, {900.0}, {600.0}, 100), DomainError);
}

TEST_CASE("slab mode limits and monotonicity") {
  const double n = slab_neff(2.41, 1.0, {160.0}, {737.0});
  CHECK(n > 1.0);
  CHECK(n < 2.41);
  CHECK(slab_neff(2.41, 1.0, {5000.0}, {737.0}) == Approx(2.41).epsilon(0.002));
  CHECK(slab_neff(2.41, 1.0, {1.0}, {737.0}) == Approx(1.0).epsilon(0.002));
  double prev = 0.0;
  for (double d = 60.0; d <= 400.0; d += 20.0) {
    const double v = slab_neff(2.41, 1.0, {d}, {737.0});
    CHECK(v > prev);
    prev = v;
  }
  prev = 10.0;
  for (double wl = 500.0; wl <= 1600.0; wl += 50.0) {
    const double v = slab_neff(2.41, 1.0, {160.0}, {wl});
    CHECK(v < prev);
    prev = v;
  }
  const auto mode = slab_te0(2.41, 1.0, {160.0}, {737.0});
  REQUIRE(mode.has_value());
  CHECK(mode->residual < 1e-10);
  CHECK_THROWS_AS(slab_neff(1.0, 1.5, {160.0}, {737.0}), DomainError);
}

}  // TEST_SUITE
