#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "phc/units.hpp"

namespace phc {

/// Bloch vector in Cartesian components, units of 2 pi / a.
using KVector = Eigen::Vector2d;

/// Gamma-M-K-Gamma through the first Brillouin zone of the triangular lattice with
/// primitive vectors a(1, 0) and a(1/2, sqrt(3)/2). The closing Gamma is included.
std::vector<KVector> triangular_k_path(int points_per_segment);

/// Reciprocal vectors kept in the expansion: every G with |G| <= (n_pw - 1)/2 * |b|,
/// i.e. whole shells, so the basis is C6 symmetric. Units of 2 pi / a.
std::vector<KVector> plane_wave_basis(int n_pw);

struct BandStructure {
  std::vector<KVector> k_path;
  Eigen::MatrixXd bands;  ///< (k index, band) normalized frequency a / lambda
  int n_pw = 0;
  int n_planewaves = 0;
  double max_negative_eigenvalue = 0.0;  ///< most negative raw eigenvalue (should be ~0)
  std::vector<std::string> warnings;
};

struct BandGap {
  int below_band;  ///< gap lies between band below_band and below_band + 1
  double lower;    ///< a / lambda
  double upper;

  bool contains(double a_over_lambda) const { return a_over_lambda > lower && a_over_lambda < upper; }
};

struct PweOptions {
  int n_pw = 11;
  int n_bands = 8;
  /// Re-solve with n_pw + 2 and warn when a gap edge moves by more than 1%.
  bool check_convergence = true;
};

/// TE (out-of-plane H) bands of a triangular lattice of air holes (radius r) in a
/// background of index n_eff, using the direct Fourier series of 1/eps.
/// Throws DomainError unless 2r < a, n_pw is odd and >= 7.
BandStructure pwe_bands(Nanometers a, Nanometers r, double n_eff, const std::vector<KVector>& k_path,
                        const PweOptions& options = {});

/// Complete gaps between consecutive bands over the sampled path.
std::vector<BandGap> band_gaps(const BandStructure& bands);

/// CSV "k_index,k_frac_x,k_frac_y,band0,band1,..." in a / lambda.
std::string bands_to_csv(const BandStructure& bands);

/// The full Hermitian operator at one k (exposed for residual checks). Units (2 pi / a)^2.
Eigen::MatrixXcd pwe_operator(double r_over_a, double eps_background, const KVector& k,
                              const std::vector<KVector>& basis);

}  // namespace phc
