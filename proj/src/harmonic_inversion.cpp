// Filtered matrix-pencil extraction of damped sinusoids from a ringdown.
//
// The band center is mixed down to zero and the trace is low-passed with a
// Blackman-windowed sinc before decimation. An FIR filter maps every damped
// exponential onto itself with the same pole, so decay rates survive the
// filtering exactly while out-of-band content stops inflating the model order.
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "phc/error.hpp"
#include "phc/specfit.hpp"

namespace phc {

namespace {

using cd = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> lowpass_taps(int taps, double cutoff_cycles_per_sample) {
  std::vector<double> h(static_cast<std::size_t>(taps));
  const double mid = 0.5 * (taps - 1);
  double sum = 0.0;
  for (int k = 0; k < taps; ++k) {
    const double u = k - mid;
    const double arg = 2.0 * cutoff_cycles_per_sample * u;
    const double sinc = u == 0.0 ? 1.0 : std::sin(std::numbers::pi * arg) / (std::numbers::pi * arg);
    const double w = taps > 1 ? 0.42 - 0.5 * std::cos(kTwoPi * k / (taps - 1)) + 0.08 * std::cos(2.0 * kTwoPi * k / (taps - 1))
                              : 1.0;
    h[static_cast<std::size_t>(k)] = sinc * w;
    sum += sinc * w;
  }
  for (double& v : h) v /= sum;
  return h;
}

}  // namespace

HarmonicInversion harmonic_inversion(const TimeTrace& trace, Frequency lo, Frequency hi, int max_modes,
                                     const HarmonicInversionOptions& options) {
  if (trace.size() < 200) throw DomainError("harmonic inversion needs at least 200 samples");
  if (!(trace.dt > 0.0)) throw DomainError("harmonic inversion needs dt > 0");
  if (!(hi.thz > lo.thz) || !(lo.thz >= 0.0)) throw DomainError("empty frequency band");
  if (max_modes < 1) throw DomainError("max_modes must be >= 1");

  HarmonicInversion out;
  const double per_unit = thz_per_inverse_unit(trace.unit);
  const double dt = trace.dt;
  const double fc = 0.5 * (lo.thz + hi.thz) / per_unit;  // cycles per trace time unit
  const double half_band = 0.5 * (hi.thz - lo.thz) / per_unit;
  if (half_band * dt >= 0.5) throw DomainError("band wider than the sampling rate supports");
  const auto n = static_cast<int>(trace.size());

  // Filter length for a transition width of one half band, capped at a quarter of the trace.
  int taps = static_cast<int>(std::ceil(6.0 / (half_band * dt)));
  taps = std::min(taps, n / 4) | 1;
  const double transition = 6.0 / (taps * dt);
  const double pass = 1.1 * half_band;
  // Components left in the transition region must not alias into the band.
  int decimation = std::max(1, static_cast<int>(std::floor(1.0 / (dt * (pass + transition + half_band)))));
  int n_out = (n - taps) / decimation + 1;
  if (n_out < 64) {
    decimation = std::max(1, (n - taps) / 63);
    n_out = (n - taps) / decimation + 1;
  }
  if (n_out > options.max_samples) {
    n_out = options.max_samples;
    out.warnings.push_back("trace truncated to " + std::to_string(n_out) + " filtered samples");
  }
  out.decimation = decimation;
  const std::vector<double> h = lowpass_taps(taps, (pass + 0.5 * transition) * dt);

  Eigen::VectorXcd z(n_out);
  for (int s = 0; s < n_out; ++s) {
    cd acc(0.0, 0.0);
    const int start = s * decimation;
    for (int k = 0; k < taps; ++k) {
      const int m = start + k;
      acc += h[static_cast<std::size_t>(k)] * trace.values[static_cast<std::size_t>(m)] *
             std::polar(1.0, -kTwoPi * fc * m * dt);
    }
    z(s) = acc;
  }
  const double z_scale = z.cwiseAbs().maxCoeff();
  if (!(z_scale > 0.0)) {
    out.warnings.push_back("no signal in band");
    return out;
  }
  z /= z_scale;

  const Eigen::Index pencil = n_out / 2;
  Eigen::MatrixXcd hankel(n_out - pencil, pencil + 1);
  for (Eigen::Index i = 0; i < n_out - pencil; ++i) hankel.row(i) = z.segment(i, pencil + 1).transpose();

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(hankel, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  Eigen::Index order = 0;
  while (order < sv.size() && sv(order) > options.singular_value_cutoff * sv(0)) ++order;
  order = std::min(order, pencil - 1);
  out.model_order = static_cast<int>(order);
  if (order == 0) {
    out.warnings.push_back("no signal above the singular value cutoff");
    return out;
  }

  // Signal-subspace pencil: the poles are the eigenvalues of V2^H pinv(V1^H).
  const Eigen::MatrixXcd v = svd.matrixV().leftCols(order);
  const Eigen::MatrixXcd v1 = v.topRows(pencil);
  const Eigen::MatrixXcd v2 = v.bottomRows(pencil);
  const Eigen::MatrixXcd gram = v1.adjoint() * v1;
  const Eigen::MatrixXcd z_matrix = (v2.adjoint() * v1) * gram.partialPivLu().inverse();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(z_matrix);
  const Eigen::VectorXcd poles = eig.eigenvalues();

  Eigen::MatrixXcd vander(n_out, order);
  for (Eigen::Index j = 0; j < order; ++j) {
    cd p(1.0, 0.0);
    for (Eigen::Index k = 0; k < n_out; ++k) {
      vander(k, j) = p;
      p *= poles(j);
    }
  }
  const Eigen::VectorXcd amps = vander.colPivHouseholderQr().solve(z);

  const double step = decimation * dt;
  for (Eigen::Index j = 0; j < order; ++j) {
    const cd p = poles(j);
    if (std::abs(p) == 0.0) continue;
    const double f = fc + std::arg(p) / (kTwoPi * step);
    const double f_thz = f * per_unit;
    if (!(f > 0.0) || f_thz < lo.thz || f_thz > hi.thz) continue;
    const double decay = -std::log(std::abs(p)) / step;
    Resonance r;
    r.frequency_thz = f_thz;
    r.decay_rate = decay;
    const double q = decay > 0.0 ? std::numbers::pi * f / decay : kLosslessQ;
    r.lossless = !(q < kLosslessQ);
    r.q = r.lossless ? kLosslessQ : q;
    // Undo the filter response for this pole; a real cosine carries half its
    // amplitude on the positive-frequency pole.
    const cd w = std::exp(cd(-decay, kTwoPi * (f - fc)) * dt);
    cd gain(0.0, 0.0);
    cd wk(1.0, 0.0);
    for (int k = 0; k < taps; ++k) {
      gain += h[static_cast<std::size_t>(k)] * wk;
      wk *= w;
    }
    const cd a = amps(j) * z_scale / gain;
    r.amplitude = 2.0 * std::abs(a);
    r.phase = std::arg(a);
    out.modes.push_back(r);
  }
  std::sort(out.modes.begin(), out.modes.end(), [](const Resonance& a, const Resonance& b) {
    return a.amplitude > b.amplitude || (a.amplitude == b.amplitude && a.frequency_thz < b.frequency_thz);
  });
  if (out.modes.size() > static_cast<std::size_t>(max_modes)) out.modes.resize(static_cast<std::size_t>(max_modes));
  if (out.modes.size() < static_cast<std::size_t>(max_modes)) {
    out.warnings.push_back("found " + std::to_string(out.modes.size()) + " of " + std::to_string(max_modes) +
                           " requested modes in band");
  }
  return out;
}

}  // namespace phc
