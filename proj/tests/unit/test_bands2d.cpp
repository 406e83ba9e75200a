#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "phc/bands2d.hpp"
#include "phc/error.hpp"

using namespace phc;
using doctest::Approx;

namespace {

// Folded light lines |k + G| of the empty triangular lattice, from a brute-force
// enumeration of reciprocal vectors b1 = (1, -1/sqrt3), b2 = (0, 2/sqrt3).
std::vector<double> light_lines(const KVector& k, int count) {
  const Eigen::Vector2d b1(1.0, -1.0 / std::sqrt(3.0));
  const Eigen::Vector2d b2(0.0, 2.0 / std::sqrt(3.0));
  std::vector<double> f;
  for (int i = -8; i <= 8; ++i) {
    for (int j = -8; j <= 8; ++j) f.push_back((k + i * b1 + j * b2).norm());
  }
  std::sort(f.begin(), f.end());
  f.resize(static_cast<std::size_t>(count));
  return f;
}

KVector rotate(const KVector& k, double angle) {
  return Eigen::Rotation2Dd(angle) * k;
}

}  // namespace

TEST_SUITE("bands2d") {

TEST_CASE("k path and basis") {
  const auto path = triangular_k_path(10);
  CHECK(path.size() == 31);
  CHECK(path.front().norm() == 0.0);
  CHECK(path.back().norm() == 0.0);
  // M at half b1, K at the hexagon corner.
  CHECK(path[10].norm() == Approx(1.0 / std::sqrt(3.0)));
  CHECK(path[20].norm() == Approx(2.0 / 3.0));
  const auto basis = plane_wave_basis(11);
  // Closed under 60 degree rotation.
  for (const KVector& g : basis) {
    const KVector r = rotate(g, M_PI / 3.0);
    const bool found = std::any_of(basis.begin(), basis.end(), [&](const KVector& h) { return (h - r).norm() < 1e-9; });
    CHECK(found);
  }
  CHECK_THROWS_AS(plane_wave_basis(10), DomainError);
}

TEST_CASE("empty lattice follows the folded light lines") {
  const auto path = triangular_k_path(6);
  PweOptions opt;
  opt.n_bands = 6;
  opt.check_convergence = false;
  const BandStructure b = pwe_bands({252.0}, {0.0}, 1.0, path, opt);
  for (std::size_t k = 0; k < path.size(); ++k) {
    const auto lines = light_lines(path[k], 6);
    for (int n = 0; n < 6; ++n) CHECK(std::abs(b.bands(static_cast<Eigen::Index>(k), n) - lines[static_cast<std::size_t>(n)]) < 1e-8);
  }
  // Uniform index scales frequencies by 1/n.
  const BandStructure b2 = pwe_bands({252.0}, {0.0}, 2.0, path, opt);
  CHECK((b2.bands - 0.5 * b.bands).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("operator is Hermitian and bands are C6 symmetric") {
  const auto basis = plane_wave_basis(9);
  const KVector k(0.21, 0.07);
  const Eigen::MatrixXcd m = pwe_operator(65.0 / 252.0, 4.0, k, basis);
  CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

  std::vector<KVector> ks;
  for (int s = 0; s < 6; ++s) ks.push_back(rotate(k, s * M_PI / 3.0));
  PweOptions opt;
  opt.n_pw = 9;
  opt.n_bands = 6;
  opt.check_convergence = false;
  const BandStructure b = pwe_bands({252.0}, {65.0}, 2.0, ks, opt);
  for (Eigen::Index s = 1; s < 6; ++s) CHECK((b.bands.row(s) - b.bands.row(0)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("gaps and CSV") {
  BandStructure b;
  b.bands.resize(3, 3);
  b.bands << 0.0, 0.3, 0.5, 0.2, 0.32, 0.6, 0.31, 0.31, 0.55;
  const auto gaps = band_gaps(b);
  REQUIRE(gaps.size() == 1);
  CHECK(gaps[0].below_band == 1);
  CHECK(gaps[0].lower == Approx(0.32));
  CHECK(gaps[0].upper == Approx(0.5));
  CHECK(gaps[0].contains(0.4));
  CHECK_FALSE(gaps[0].contains(0.6));
  CHECK_THROWS_AS(pwe_bands({252.0}, {130.0}, 2.0, triangular_k_path(2)), DomainError);
}

}  // TEST_SUITE
