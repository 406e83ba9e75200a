#include "phc/bands2d.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "phc/error.hpp"
#include "phc/format.hpp"
#include "phc/parallel.hpp"

namespace phc {

namespace {

// Reciprocal primitive vectors in units of 2 pi / a.
const KVector kB1(1.0, -1.0 / std::sqrt(3.0));
const KVector kB2(0.0, 2.0 / std::sqrt(3.0));

// Fourier coefficient of 1/eps for a centered circular air hole per unit cell.
double inverse_eps_coefficient(const KVector& g, double r_over_a, double eps_b) {
  const double fill = M_PI * r_over_a * r_over_a / (std::sqrt(3.0) / 2.0);
  const double contrast = 1.0 - 1.0 / eps_b;
  const double gn = g.norm();
  if (gn < 1e-12) return 1.0 / eps_b + contrast * fill;
  if (r_over_a == 0.0) return 0.0;
  const double x = 2.0 * M_PI * gn * r_over_a;
  return contrast * fill * 2.0 * std::cyl_bessel_j(1.0, x) / x;
}

std::vector<double> lowest_bands(double r_over_a, double eps_b, const KVector& k,
                                 const std::vector<KVector>& basis, int n_bands, double& most_negative) {
  const Eigen::MatrixXcd op = pwe_operator(r_over_a, eps_b, k, basis);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("PWE eigensolve failed");
  const Eigen::VectorXd& ev = solver.eigenvalues();
  std::vector<double> out;
  for (int b = 0; b < n_bands && b < ev.size(); ++b) {
    most_negative = std::min(most_negative, ev(b));
    // eigenvalue is (|k| a / 2 pi)^2-scaled (omega a / 2 pi c)^2
    out.push_back(std::sqrt(std::max(ev(b), 0.0)));
  }
  return out;
}

}  // namespace

std::vector<KVector> triangular_k_path(int points_per_segment) {
  if (points_per_segment < 1) throw DomainError("points_per_segment must be >= 1");
  const KVector gamma(0.0, 0.0);
  const KVector m = 0.5 * kB2;
  const KVector k(1.0 / 3.0, 1.0 / std::sqrt(3.0));
  const KVector corners[] = {gamma, m, k, gamma};
  std::vector<KVector> path;
  for (int s = 0; s < 3; ++s) {
    for (int p = 0; p < points_per_segment; ++p) {
      const double t = static_cast<double>(p) / points_per_segment;
      path.push_back(corners[s] + t * (corners[s + 1] - corners[s]));
    }
  }
  path.push_back(gamma);
  return path;
}

std::vector<KVector> plane_wave_basis(int n_pw) {
  if (n_pw < 1 || n_pw % 2 == 0) throw DomainError("n_pw must be odd");
  const int half = (n_pw - 1) / 2;
  const double radius = half * kB1.norm() * (1.0 + 1e-9);
  const int span = 2 * half + 1;
  std::vector<KVector> basis;
  for (int m = -span; m <= span; ++m) {
    for (int n = -span; n <= span; ++n) {
      const KVector g = m * kB1 + n * kB2;
      if (g.norm() <= radius) basis.push_back(g);
    }
  }
  std::sort(basis.begin(), basis.end(), [](const KVector& l, const KVector& r) {
    const double ln = l.norm();
    const double rn = r.norm();
    if (std::abs(ln - rn) > 1e-12) return ln < rn;
    return std::atan2(l.y(), l.x()) < std::atan2(r.y(), r.x());
  });
  return basis;
}

Eigen::MatrixXcd pwe_operator(double r_over_a, double eps_background, const KVector& k,
                              const std::vector<KVector>& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd op(n, n);
  for (Eigen::Index p = 0; p < n; ++p) {
    const KVector kp = k + basis[static_cast<std::size_t>(p)];
    for (Eigen::Index q = 0; q <= p; ++q) {
      const KVector kq = k + basis[static_cast<std::size_t>(q)];
      const double eta = inverse_eps_coefficient(basis[static_cast<std::size_t>(p)] - basis[static_cast<std::size_t>(q)],
                                                 r_over_a, eps_background);
      const double v = eta * kp.dot(kq);
      op(p, q) = v;
      op(q, p) = v;
    }
  }
  return op;
}

BandStructure pwe_bands(Nanometers a, Nanometers r, double n_eff, const std::vector<KVector>& k_path,
                        const PweOptions& options) {
  if (!(a.value > 0.0) || !(r.value >= 0.0) || !(2.0 * r.value < a.value)) {
    throw DomainError("PWE requires 0 <= 2r < a");
  }
  if (options.n_pw < 7 || options.n_pw % 2 == 0) throw DomainError("n_pw must be odd and >= 7");
  if (!(n_eff >= 1.0)) throw DomainError("n_eff must be >= 1");
  if (options.n_bands < 1) throw DomainError("n_bands must be >= 1");

  const double r_over_a = r.value / a.value;
  const double eps_b = n_eff * n_eff;
  const std::vector<KVector> basis = plane_wave_basis(options.n_pw);
  const int n_bands = std::min<int>(options.n_bands, static_cast<int>(basis.size()));

  BandStructure out;
  out.k_path = k_path;
  out.n_pw = options.n_pw;
  out.n_planewaves = static_cast<int>(basis.size());
  out.bands.resize(static_cast<Eigen::Index>(k_path.size()), n_bands);
  std::vector<double> most_negative(k_path.size(), 0.0);
  std::vector<std::exception_ptr> failures(k_path.size());

#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (std::size_t kk = 0; kk < k_path.size(); ++kk) {
    try {
      const std::vector<double> w = lowest_bands(r_over_a, eps_b, k_path[kk], basis, n_bands, most_negative[kk]);
      for (int b = 0; b < n_bands; ++b) out.bands(static_cast<Eigen::Index>(kk), b) = w[static_cast<std::size_t>(b)];
    } catch (...) {
      failures[kk] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  out.max_negative_eigenvalue = *std::min_element(most_negative.begin(), most_negative.end());
  if (out.max_negative_eigenvalue < -1e-9) {
    out.warnings.push_back("negative eigenvalue " + format_double(out.max_negative_eigenvalue));
  }

  if (options.check_convergence) {
    PweOptions finer = options;
    finer.n_pw = options.n_pw + 2;
    finer.check_convergence = false;
    const BandStructure ref = pwe_bands(a, r, n_eff, k_path, finer);
    const auto gaps = band_gaps(out);
    const auto ref_gaps = band_gaps(ref);
    for (const BandGap& g : gaps) {
      for (const BandGap& rg : ref_gaps) {
        if (rg.below_band != g.below_band) continue;
        const double shift = std::max(std::abs(rg.lower - g.lower) / g.lower, std::abs(rg.upper - g.upper) / g.upper);
        if (shift > 0.01) {
          out.warnings.push_back("gap above band " + std::to_string(g.below_band) + " moves by " +
                                 format_double(100.0 * shift) + "% between n_pw " + std::to_string(options.n_pw) +
                                 " and " + std::to_string(finer.n_pw));
        }
      }
    }
  }
  return out;
}

std::vector<BandGap> band_gaps(const BandStructure& bs) {
  std::vector<BandGap> gaps;
  for (Eigen::Index b = 0; b + 1 < bs.bands.cols(); ++b) {
    const double top = bs.bands.col(b).maxCoeff();
    const double bottom = bs.bands.col(b + 1).minCoeff();
    if (bottom > top) gaps.push_back({static_cast<int>(b), top, bottom});
  }
  return gaps;
}

std::string bands_to_csv(const BandStructure& bs) {
  std::ostringstream out;
  out << "k_index,k_frac_x,k_frac_y";
  for (Eigen::Index b = 0; b < bs.bands.cols(); ++b) out << ",band" << b;
  out << '\n';
  for (std::size_t k = 0; k < bs.k_path.size(); ++k) {
    out << k << ',' << format_double(bs.k_path[k].x()) << ',' << format_double(bs.k_path[k].y());
    for (Eigen::Index b = 0; b < bs.bands.cols(); ++b) {
      out << ',' << format_double(bs.bands(static_cast<Eigen::Index>(k), b));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace phc
