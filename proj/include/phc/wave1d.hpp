#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "phc/units.hpp"

namespace phc {

struct Layer {
  double n;
  double thickness_nm;
};

/// Lossless planar stack at normal incidence. Light enters from ambient_n and
/// leaves into exit_n (defaults to ambient_n).
struct LayerStack {
  std::vector<Layer> layers;
  double ambient_n = 1.0;
  std::optional<double> exit_n;

  double exit_index() const { return exit_n.value_or(ambient_n); }
};

/// Characteristic (Abeles) matrix mapping tangential (E, H) across the layers.
/// det = 1 for any lossless stack.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 2, 2> characteristic_matrix(const std::vector<Layer>& layers,
                                                                 Scalar wavelength_nm) {
  using Complex = std::complex<Scalar>;
  using Mat = Eigen::Matrix<Complex, 2, 2>;
  const Scalar two_pi = Scalar(2) * Scalar(EIGEN_PI);
  Mat m = Mat::Identity();
  for (const Layer& layer : layers) {
    const Scalar n = static_cast<Scalar>(layer.n);
    const Scalar delta = two_pi * n * static_cast<Scalar>(layer.thickness_nm) / wavelength_nm;
    const Scalar c = std::cos(delta);
    const Scalar s = std::sin(delta);
    Mat layer_m;
    layer_m << Complex(c, 0), Complex(0, s / n), Complex(0, n * s), Complex(c, 0);
    m = m * layer_m;
  }
  return m;
}

struct TransferResult {
  Eigen::Matrix2cd matrix;
  std::complex<double> r;  ///< amplitude reflection coefficient
  std::complex<double> t;  ///< amplitude transmission coefficient
  double reflectance;
  double transmittance;
};

TransferResult transfer_matrix(const LayerStack& stack, Wavelength wavelength);

/// Real trace of the unit-cell characteristic matrix; |trace| <= 2 inside a pass band.
double bloch_trace(const std::vector<Layer>& unit_cell, Wavelength wavelength);

struct BandEdge {
  double wavelength_nm;
  bool gap_above;  ///< the interval on the long-wavelength side of this edge is a stop band
};

/// Scans n_samples points over [lo, hi] and bisects every crossing of |trace| = 2.
/// Throws DomainError for a degenerate range or fewer than 2 samples.
std::vector<BandEdge> bragg_band_edges(const std::vector<Layer>& unit_cell, Wavelength lo, Wavelength hi,
                                       int n_samples);

/// Gap intervals [edge, next edge] implied by a list of band edges. A stop band
/// touching the scan boundary is closed by that boundary.
std::vector<std::pair<double, double>> stop_bands(const std::vector<BandEdge>& edges, Wavelength lo,
                                                  Wavelength hi, bool gap_at_lo);

struct SlabMode {
  double n_eff;
  int iterations;
  double residual;
};

/// Fundamental TE mode of a symmetric slab, found by bisection on
/// tan(kappa d / 2) = gamma / kappa. Returns nullopt below cutoff (never happens
/// for TE0 of a symmetric slab). Throws DomainError unless n_core > n_clad >= 1.
std::optional<SlabMode> slab_te0(double n_core, double n_clad, Nanometers thickness, Wavelength wavelength);

/// Convenience wrapper returning n_eff; throws DomainError below cutoff.
double slab_neff(double n_core, double n_clad, Nanometers thickness, Wavelength wavelength);

}  // namespace phc
