#include "phc/specfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "phc/error.hpp"

namespace phc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Affine map of the abscissa onto roughly [-1, 1] so every fit is solved on an
// O(1) scale regardless of the axis offset (737 nm, 406770 GHz, ...).
struct AxisMap {
  double center;
  double scale;

  double to_unit(double x) const { return (x - center) / scale; }
};

AxisMap axis_map(const std::vector<double>& x) {
  const double lo = x.front();
  const double hi = x.back();
  const double scale = hi > lo ? 0.5 * (hi - lo) : 1.0;
  return {0.5 * (lo + hi), scale};
}

double peak_abs(const std::vector<double>& y) {
  double m = 0.0;
  for (double v : y) m = std::max(m, std::abs(v));
  return m > 0.0 ? m : 1.0;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

// Width between the level crossings on either side of index `at`; `above` says
// whether the feature is a peak (values fall below the level away from it).
std::optional<double> crossing_width(const std::vector<double>& u, const std::vector<double>& v, std::size_t at,
                                     double level, bool peak) {
  auto beyond = [&](double value) { return peak ? value < level : value > level; };
  auto interp = [&](std::size_t a, std::size_t b) {
    const double t = (level - v[a]) / (v[b] - v[a]);
    return u[a] + t * (u[b] - u[a]);
  };
  std::optional<double> left;
  std::optional<double> right;
  for (std::size_t k = at; k > 0; --k) {
    if (beyond(v[k - 1])) {
      left = interp(k, k - 1);
      break;
    }
  }
  for (std::size_t k = at; k + 1 < v.size(); ++k) {
    if (beyond(v[k + 1])) {
      right = interp(k, k + 1);
      break;
    }
  }
  if (left && right) return *right - *left;
  if (left) return 2.0 * (u[at] - *left);
  if (right) return 2.0 * (*right - u[at]);
  return std::nullopt;
}

double sigma_of(const LmOutcome& lm, Eigen::Index k) {
  const double var = lm.covariance(k, k);
  if (!std::isfinite(var)) return kInf;
  return std::sqrt(std::max(var, 0.0));
}

double residual_rms(const LmOutcome& lm, Eigen::Index n, double y_scale) {
  return std::sqrt(2.0 * lm.final_cost / static_cast<double>(n)) * y_scale;
}

// Marquardt damping needs a floor for parameters the data does not constrain.
LmOptions with_defaults(const LmOptions& lm) { return lm; }

}  // namespace

double FitResult::value(std::string_view name) const {
  for (const auto& p : params) {
    if (p.name == name) return p.value;
  }
  throw std::out_of_range("no fit parameter named " + std::string(name));
}

double FitResult::sigma(std::string_view name) const {
  for (const auto& p : params) {
    if (p.name == name) return p.uncertainty;
  }
  throw std::out_of_range("no fit parameter named " + std::string(name));
}

Json to_json(const FitResult& fit) {
  Json params = Json::object();
  for (const auto& p : fit.params) {
    params[p.name] = {{"value", p.value},
                      {"uncertainty", std::isfinite(p.uncertainty) ? Json(p.uncertainty) : Json(nullptr)}};
  }
  Json derived = Json::object();
  for (const auto& [k, v] : fit.derived) derived[k] = std::isfinite(v) ? Json(v) : Json(nullptr);
  return Json{{"model", fit.model},       {"parameters", params},          {"derived", derived},
              {"residual_rms", fit.residual_rms}, {"converged", fit.converged}, {"iterations", fit.iterations},
              {"notes", fit.notes}};
}

double lorentzian_peak(double x, double center, double fwhm, double amplitude, double offset) {
  const double h = 0.5 * fwhm;
  const double d = x - center;
  return offset + amplitude * h * h / (d * d + h * h);
}

double reflection_dip(double nu, double center, double kappa, double r0, double baseline) {
  const double h = 0.5 * kappa;
  const double d = nu - center;
  return baseline * (1.0 - (1.0 - r0) * h * h / (d * d + h * h));
}

FitResult fit_lorentzian_peak(const Spectrum& s, const PeakGuess& guess, const LmOptions& lm_options) {
  validate(s);
  if (s.size() < 8) throw DomainError("Lorentzian fit needs at least 8 samples");
  const AxisMap map = axis_map(s.axis);
  const double ys = peak_abs(s.counts);
  const auto n = static_cast<Eigen::Index>(s.size());
  std::vector<double> u(s.size());
  std::vector<double> v(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    u[i] = map.to_unit(s.axis[i]);
    v[i] = s.counts[i] / ys;
  }

  const auto peak_it = std::max_element(v.begin(), v.end());
  const auto at = static_cast<std::size_t>(peak_it - v.begin());
  const double vmin = *std::min_element(v.begin(), v.end());
  const double b0 = guess.offset ? *guess.offset / ys : vmin;
  const double a0 = guess.amplitude ? *guess.amplitude / ys : *peak_it - b0;
  const double c0 = guess.center ? map.to_unit(*guess.center) : u[at];
  double g0 = guess.width ? *guess.width / map.scale : 0.5;
  if (!guess.width) {
    if (const auto w = crossing_width(u, v, at, b0 + 0.5 * a0, true); w && *w > 0.0) g0 = *w;
  }

  auto residual = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd& j) {
    const double c = p(0), g = p(1), a = p(2), b = p(3);
    if (!(g > 0.0)) return false;
    const double h = 0.5 * g;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = u[static_cast<std::size_t>(i)] - c;
      const double den = d * d + h * h;
      const double l = h * h / den;
      r(i) = b + a * l - v[static_cast<std::size_t>(i)];
      j(i, 0) = a * h * h * 2.0 * d / (den * den);
      j(i, 1) = a * h * d * d / (den * den);
      j(i, 2) = l;
      j(i, 3) = 1.0;
    }
    return true;
  };

  Eigen::VectorXd p0(4);
  p0 << c0, g0, a0, b0;
  const LmOutcome lm = levenberg_marquardt(residual, p0, n, with_defaults(lm_options));

  FitResult out;
  out.model = "lorentzian_peak";
  const double center = map.center + map.scale * lm.params(0);
  const double fwhm = map.scale * lm.params(1);
  const double sc = map.scale * sigma_of(lm, 0);
  const double sg = map.scale * sigma_of(lm, 1);
  out.params = {{"center", center, sc},
                {"fwhm", fwhm, sg},
                {"amplitude", ys * lm.params(2), ys * sigma_of(lm, 2)},
                {"offset", ys * lm.params(3), ys * sigma_of(lm, 3)}};
  out.derived["q"] = center / fwhm;
  out.derived["q_uncertainty"] = std::abs(center / fwhm) * std::hypot(sc / center, sg / fwhm);
  out.residual_rms = residual_rms(lm, n, ys);
  out.iterations = lm.iterations;
  out.converged = lm.converged;
  if (!lm.converged) out.notes.push_back("optimizer did not converge");

  const double amp = lm.params(2);
  if (!(amp > 3.0 * sigma_of(lm, 2)) || !(amp > 1e-9)) {
    out.converged = false;
    out.notes.push_back("no significant peak: amplitude not resolved above its uncertainty");
  }
  return out;
}

FitResult fit_reflection_dip(const Spectrum& s, const PeakGuess& guess, const LmOptions& lm_options) {
  validate(s);
  if (s.size() < 8) throw DomainError("dip fit needs at least 8 samples");
  const AxisMap map = axis_map(s.axis);
  const double ys = peak_abs(s.counts);
  const auto n = static_cast<Eigen::Index>(s.size());
  std::vector<double> u(s.size());
  std::vector<double> v(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    u[i] = map.to_unit(s.axis[i]);
    v[i] = s.counts[i] / ys;
  }

  const std::size_t edge = std::max<std::size_t>(1, s.size() / 10);
  const double left = median(std::vector<double>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(edge)));
  const double right = median(std::vector<double>(v.end() - static_cast<std::ptrdiff_t>(edge), v.end()));
  const double b0 = guess.offset ? *guess.offset / ys : std::max(left, right);
  const auto min_it = std::min_element(v.begin(), v.end());
  const auto at = static_cast<std::size_t>(min_it - v.begin());
  const double c0 = guess.center ? map.to_unit(*guess.center) : u[at];
  const double r0 = b0 > 0.0 ? std::clamp(*min_it / b0, 0.0, 1.0) : 0.0;
  double k0 = guess.width ? *guess.width / map.scale : 0.5;
  if (!guess.width) {
    if (const auto w = crossing_width(u, v, at, 0.5 * (b0 + *min_it), false); w && *w > 0.0) k0 = *w;
  }

  auto residual = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd& j) {
    const double c = p(0), k = p(1), rr = p(2), b = p(3);
    if (!(k > 0.0)) return false;
    const double h = 0.5 * k;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = u[static_cast<std::size_t>(i)] - c;
      const double den = d * d + h * h;
      const double l = h * h / den;
      r(i) = b * (1.0 - (1.0 - rr) * l) - v[static_cast<std::size_t>(i)];
      j(i, 0) = -b * (1.0 - rr) * h * h * 2.0 * d / (den * den);
      j(i, 1) = -b * (1.0 - rr) * h * d * d / (den * den);
      j(i, 2) = b * l;
      j(i, 3) = 1.0 - (1.0 - rr) * l;
    }
    return true;
  };

  Eigen::VectorXd p0(4);
  p0 << c0, k0, r0, b0;
  const LmOutcome lm = levenberg_marquardt(residual, p0, n, with_defaults(lm_options));

  FitResult out;
  out.model = "reflection_dip";
  const double center = map.center + map.scale * lm.params(0);
  const double kappa = map.scale * lm.params(1);
  const double sc = map.scale * sigma_of(lm, 0);
  const double sk = map.scale * sigma_of(lm, 1);
  out.params = {{"center", center, sc},
                {"kappa", kappa, sk},
                {"r0", lm.params(2), sigma_of(lm, 2)},
                {"baseline", ys * lm.params(3), ys * sigma_of(lm, 3)}};
  out.derived["q_loaded"] = center / kappa;
  out.derived["q_loaded_uncertainty"] = std::abs(center / kappa) * std::hypot(sc / center, sk / kappa);
  out.derived["contrast"] = 1.0 - lm.params(2);
  out.residual_rms = residual_rms(lm, n, ys);
  out.iterations = lm.iterations;
  out.converged = lm.converged;
  if (!lm.converged) out.notes.push_back("optimizer did not converge");

  const double depth = 1.0 - lm.params(2);
  if (!(depth > 3.0 * sigma_of(lm, 2)) || !(depth > 1e-9)) {
    out.converged = false;
    out.notes.push_back("degenerate fit: no resolvable dip (r0 ~ 1)");
  }
  return out;
}

FitResult fit_exponential_lifetime(const TimeTrace& h, std::optional<double> t_start, const LmOptions& lm_options) {
  if (h.size() < 8 || !(h.dt > 0.0)) throw DomainError("lifetime fit needs >= 8 uniformly spaced bins");
  for (double c : h.values) {
    if (!(c >= 0.0)) throw DomainError("histogram counts must be non-negative");
  }
  const auto peak = static_cast<std::size_t>(std::max_element(h.values.begin(), h.values.end()) - h.values.begin());
  const double start = t_start.value_or(h.time(peak) + 2.0 * h.dt);
  std::size_t first = 0;
  while (first < h.size() && h.time(first) < start - 1e-12 * std::abs(h.dt)) ++first;
  if (h.size() - first < 5) throw DomainError("too few bins after t_start");

  const auto n = static_cast<Eigen::Index>(h.size() - first);
  const double t_first = h.time(first);
  const double span = h.time(h.size() - 1) - t_first;
  std::vector<double> u(static_cast<std::size_t>(n));
  std::vector<double> v(static_cast<std::size_t>(n));
  std::vector<double> w(static_cast<std::size_t>(n));
  double ys = 0.0;
  for (std::size_t k = first; k < h.size(); ++k) ys = std::max(ys, h.values[k]);
  if (!(ys > 0.0)) ys = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::size_t k = first + static_cast<std::size_t>(i);
    u[static_cast<std::size_t>(i)] = (h.time(k) - t_first) / span;
    v[static_cast<std::size_t>(i)] = h.values[k] / ys;
    w[static_cast<std::size_t>(i)] = ys / std::sqrt(std::max(h.values[k], 1.0));
  }

  const std::size_t tail = std::max<std::size_t>(1, v.size() / 10);
  const double b0 = std::accumulate(v.end() - static_cast<std::ptrdiff_t>(tail), v.end(), 0.0) / tail;
  const double a0 = std::max(v.front() - b0, 0.0);
  double tau0 = 1.0 / 3.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] - b0 < a0 / M_E) {
      if (u[i] > 0.0) tau0 = u[i];
      break;
    }
  }

  auto residual = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd& j) {
    const double a = p(0), tau = p(1), b = p(2);
    if (!(tau > 0.0)) return false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::size_t k = static_cast<std::size_t>(i);
      const double e = std::exp(-u[k] / tau);
      r(i) = (a * e + b - v[k]) * w[k];
      j(i, 0) = e * w[k];
      j(i, 1) = a * e * u[k] / (tau * tau) * w[k];
      j(i, 2) = w[k];
    }
    return true;
  };

  Eigen::VectorXd p0(3);
  p0 << a0, tau0, b0;
  const LmOutcome lm = levenberg_marquardt(residual, p0, n, lm_options);

  FitResult out;
  out.model = "exponential_lifetime";
  out.params = {{"tau", span * lm.params(1), span * sigma_of(lm, 1)},
                {"amplitude", ys * lm.params(0), ys * sigma_of(lm, 0)},
                {"offset", ys * lm.params(2), ys * sigma_of(lm, 2)}};
  out.derived["t_start"] = t_first;
  double unweighted = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    const double m = lm.params(0) * std::exp(-u[k] / lm.params(1)) + lm.params(2);
    unweighted += (m - v[k]) * (m - v[k]);
  }
  out.residual_rms = std::sqrt(unweighted / static_cast<double>(n)) * ys;
  out.iterations = lm.iterations;
  out.converged = lm.converged;
  if (!lm.converged) out.notes.push_back("optimizer did not converge");
  const double a = lm.params(0);
  if (!(a > 3.0 * sigma_of(lm, 0)) || !(a > 1e-9) || !(lm.params(1) < 10.0)) {
    out.converged = false;
    out.notes.push_back("lifetime unidentifiable: no resolvable decay in the fit window");
  }
  return out;
}

FitResult fit_g2(const TimeTrace& h, const LmOptions& lm_options) {
  if (h.size() < 8 || !(h.dt > 0.0)) throw DomainError("g2 fit needs >= 8 uniformly spaced bins");
  for (double c : h.values) {
    if (!(c >= 0.0)) throw DomainError("histogram counts must be non-negative");
  }
  const auto n = static_cast<Eigen::Index>(h.size());
  double t_max = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) t_max = std::max(t_max, std::abs(h.time(k)));
  if (!(t_max > 0.0)) throw DomainError("g2 histogram needs a non-zero delay range");

  // Normalization window: the outer half of the delay range.
  double norm_sum = 0.0;
  int norm_count = 0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (std::abs(h.time(k)) > 0.5 * t_max) {
      norm_sum += h.values[k];
      ++norm_count;
    }
  }
  double ys = norm_count > 0 ? norm_sum / norm_count : 0.0;
  if (!(ys > 0.0)) ys = std::max(peak_abs(h.values), 1.0);

  std::vector<double> u(h.size());
  std::vector<double> v(h.size());
  std::vector<double> w(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) {
    u[k] = h.time(k) / t_max;
    v[k] = h.values[k] / ys;
    w[k] = ys / std::sqrt(std::max(h.values[k], 1.0));
  }

  // Starting point from the bins nearest zero delay.
  std::vector<std::size_t> order(h.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return std::abs(u[l]) < std::abs(u[r]) || (std::abs(u[l]) == std::abs(u[r]) && l < r);
  });
  double g0 = 0.0;
  const std::size_t near = std::min<std::size_t>(3, order.size());
  for (std::size_t k = 0; k < near; ++k) g0 += v[order[k]];
  g0 = std::clamp(g0 / static_cast<double>(near), 0.0, 1.5);
  double tc0 = 0.05;
  const double level = 1.0 - (1.0 - g0) / M_E;
  for (std::size_t idx : order) {
    if (u[idx] <= 0.0) continue;
    if ((g0 < 1.0 && v[idx] >= level) || (g0 > 1.0 && v[idx] <= level)) {
      tc0 = std::max(u[idx], 1e-3);
      break;
    }
  }

  auto residual = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd& j) {
    const double g = p(0), tc = p(1), nn = p(2);
    if (!(tc > 0.0) || !(nn > 0.0)) return false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::size_t k = static_cast<std::size_t>(i);
      const double au = std::abs(u[k]);
      const double e = std::exp(-au / tc);
      r(i) = (nn * (1.0 - (1.0 - g) * e) - v[k]) * w[k];
      j(i, 0) = nn * e * w[k];
      j(i, 1) = -nn * (1.0 - g) * e * au / (tc * tc) * w[k];
      j(i, 2) = (1.0 - (1.0 - g) * e) * w[k];
    }
    return true;
  };

  Eigen::VectorXd p0(3);
  p0 << g0, tc0, 1.0;
  const LmOutcome lm = levenberg_marquardt(residual, p0, n, lm_options);

  FitResult out;
  out.model = "g2_antibunching";
  const double g2 = lm.params(0);
  const double sg = sigma_of(lm, 0);
  out.params = {{"g2_0", g2, sg},
                {"tau_c", t_max * lm.params(1), t_max * sigma_of(lm, 1)},
                {"norm", ys * lm.params(2), ys * sigma_of(lm, 2)}};
  out.derived["single_emitter"] = (std::isfinite(sg) && g2 + sg < 0.5) ? 1.0 : 0.0;
  double unweighted = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double m = lm.params(2) * (1.0 - (1.0 - g2) * std::exp(-std::abs(u[k]) / lm.params(1)));
    unweighted += (m - v[k]) * (m - v[k]);
  }
  out.residual_rms = std::sqrt(unweighted / static_cast<double>(n)) * ys;
  out.iterations = lm.iterations;
  out.converged = lm.converged;
  if (!lm.converged) out.notes.push_back("optimizer did not converge");
  if (!std::isfinite(sigma_of(lm, 1))) out.notes.push_back("tau_c unconstrained (no antibunching dip)");
  return out;
}

PleStability ple_stability(const std::vector<Spectrum>& scans) {
  PleStability out;
  for (const Spectrum& scan : scans) {
    Spectrum normalized = scan;
    const double peak = peak_abs(scan.counts);
    for (double& c : normalized.counts) c /= peak;
    const FitResult fit = fit_lorentzian_peak(normalized);
    if (!fit.converged) {
      ++out.excluded;
      continue;
    }
    out.centers_mhz.push_back(fit.value("center") * 1e3);
    out.linewidths_mhz.push_back(fit.value("fwhm") * 1e3);
    ++out.used;
  }
  if (out.used < 2) throw DomainError("PLE stability needs at least two fittable scans");
  out.mean_linewidth_mhz =
      std::accumulate(out.linewidths_mhz.begin(), out.linewidths_mhz.end(), 0.0) / out.used;
  const auto [lo, hi] = std::minmax_element(out.centers_mhz.begin(), out.centers_mhz.end());
  out.max_drift_mhz = *hi - *lo;
  out.drift_per_linewidth = out.max_drift_mhz / out.mean_linewidth_mhz;
  return out;
}

HysteresisCheck hysteresis_check(const Spectrum& forward, const Spectrum& backward, double q_threshold) {
  const FitResult f = fit_lorentzian_peak(forward);
  const FitResult b = fit_lorentzian_peak(backward);
  HysteresisCheck out;
  out.q_forward = f.derived.at("q");
  out.q_backward = b.derived.at("q");
  out.center_shift = b.value("center") - f.value("center");
  out.mean_fwhm = 0.5 * (f.value("fwhm") + b.value("fwhm"));
  if (!f.converged || !b.converged) {
    out.thermo_optic = Verdict::Indeterminate;
    return out;
  }
  const double mean_q = 0.5 * (out.q_forward + out.q_backward);
  const bool q_split = std::abs(out.q_forward - out.q_backward) / mean_q > q_threshold;
  const bool shifted = std::abs(out.center_shift) > out.mean_fwhm;
  out.thermo_optic = (q_split || shifted) ? Verdict::Yes : Verdict::No;
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::No: return "false";
    case Verdict::Yes: return "true";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

}  // namespace phc
