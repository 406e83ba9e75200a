#include "phc/wave1d.hpp"

#include <algorithm>
#include <cmath>

#include "phc/error.hpp"

namespace phc {

namespace {

constexpr int kMaxBisection = 200;
constexpr double kTolerance = 1e-12;

void check_stack(const std::vector<Layer>& layers) {
  for (const Layer& l : layers) {
    if (!(l.n >= 1.0)) throw DomainError("layer index must be >= 1");
    if (!(l.thickness_nm > 0.0)) throw DomainError("layer thickness must be positive");
  }
}

}  // namespace

TransferResult transfer_matrix(const LayerStack& stack, Wavelength wavelength) {
  if (!(wavelength.nm > 0.0)) throw DomainError("wavelength must be positive");
  check_stack(stack.layers);
  const Eigen::Matrix2cd m = characteristic_matrix<double>(stack.layers, wavelength.nm);
  const double n0 = stack.ambient_n;
  const double ns = stack.exit_index();
  const std::complex<double> b = m(0, 0) + m(0, 1) * ns;
  const std::complex<double> c = m(1, 0) + m(1, 1) * ns;
  const std::complex<double> denom = n0 * b + c;
  TransferResult out;
  out.matrix = m;
  out.r = (n0 * b - c) / denom;
  out.t = 2.0 * n0 / denom;
  out.reflectance = std::norm(out.r);
  out.transmittance = ns / n0 * std::norm(out.t);
  return out;
}

double bloch_trace(const std::vector<Layer>& unit_cell, Wavelength wavelength) {
  return characteristic_matrix<double>(unit_cell, wavelength.nm).trace().real();
}

std::vector<BandEdge> bragg_band_edges(const std::vector<Layer>& unit_cell, Wavelength lo, Wavelength hi,
                                       int n_samples) {
  if (!(lo.nm > 0.0) || !(hi.nm > lo.nm)) throw DomainError("wavelength range must satisfy 0 < lo < hi");
  if (n_samples < 2) throw DomainError("need at least 2 samples");
  check_stack(unit_cell);

  auto excess = [&](double lambda) { return std::abs(bloch_trace(unit_cell, {lambda})) - 2.0; };

  std::vector<BandEdge> edges;
  const double step = (hi.nm - lo.nm) / (n_samples - 1);
  double prev_l = lo.nm;
  double prev_f = excess(prev_l);
  for (int i = 1; i < n_samples; ++i) {
    const double l = (i == n_samples - 1) ? hi.nm : lo.nm + i * step;
    const double f = excess(l);
    if ((prev_f > 0.0) != (f > 0.0)) {
      double a = prev_l;
      double b = l;
      const bool a_in_gap = prev_f > 0.0;
      for (int it = 0; it < kMaxBisection && (b - a) > kTolerance * b; ++it) {
        const double mid = 0.5 * (a + b);
        if ((excess(mid) > 0.0) == a_in_gap) {
          a = mid;
        } else {
          b = mid;
        }
      }
      edges.push_back({0.5 * (a + b), !a_in_gap});
    }
    prev_l = l;
    prev_f = f;
  }
  return edges;
}

std::vector<std::pair<double, double>> stop_bands(const std::vector<BandEdge>& edges, Wavelength lo,
                                                  Wavelength hi, bool gap_at_lo) {
  std::vector<std::pair<double, double>> gaps;
  double open = gap_at_lo ? lo.nm : -1.0;
  for (const BandEdge& e : edges) {
    if (e.gap_above) {
      open = e.wavelength_nm;
    } else if (open >= 0.0) {
      gaps.emplace_back(open, e.wavelength_nm);
      open = -1.0;
    }
  }
  if (open >= 0.0) gaps.emplace_back(open, hi.nm);
  return gaps;
}

std::optional<SlabMode> slab_te0(double n_core, double n_clad, Nanometers thickness, Wavelength wavelength) {
  if (!(n_clad >= 1.0) || !(n_core > n_clad)) throw DomainError("slab requires n_core > n_clad >= 1");
  if (!(thickness.value > 0.0) || !(wavelength.nm > 0.0)) {
    throw DomainError("slab thickness and wavelength must be positive");
  }
  const double k0 = 2.0 * M_PI / wavelength.nm;
  const double half_d = 0.5 * thickness.value;

  // Residual of kappa*sin(kappa d/2) - gamma*cos(kappa d/2), normalized by k0; it has
  // the sign of tan(kappa d/2) - gamma/kappa on the TE0 branch kappa d/2 < pi/2.
  auto residual = [&](double n) {
    const double kappa = k0 * std::sqrt(std::max(n_core * n_core - n * n, 0.0));
    const double gamma = k0 * std::sqrt(std::max(n * n - n_clad * n_clad, 0.0));
    return (kappa * std::sin(kappa * half_d) - gamma * std::cos(kappa * half_d)) / k0;
  };

  // Lower bracket: cladding index, or where kappa d/2 reaches pi/2 for thick slabs.
  double lo = n_clad;
  const double kappa_max = M_PI / (2.0 * half_d * k0);
  if (n_core * n_core - kappa_max * kappa_max > n_clad * n_clad) {
    lo = std::sqrt(n_core * n_core - kappa_max * kappa_max);
  }
  double hi = n_core;
  if (!(residual(lo) > 0.0) || !(residual(hi) < 0.0)) return std::nullopt;

  int it = 0;
  for (; it < kMaxBisection; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (residual(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double n_eff = 0.5 * (lo + hi);
  return SlabMode{n_eff, it, std::abs(residual(n_eff))};
}

double slab_neff(double n_core, double n_clad, Nanometers thickness, Wavelength wavelength) {
  const auto mode = slab_te0(n_core, n_clad, thickness, wavelength);
  if (!mode) throw DomainError("slab is below cutoff");
  return mode->n_eff;
}

}  // namespace phc
