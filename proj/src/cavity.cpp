#include "phc/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "phc/error.hpp"
#include "phc/wave1d.hpp"

namespace phc {

SimConfig cavity_ringdown_config(const CavitySimOptions& o, const Outline& outline) {
  SimConfig cfg = o.base;
  const double cx = 0.5 * (outline.x_min_nm + outline.x_max_nm);
  const double cy = 0.5 * (outline.y_min_nm + outline.y_max_nm);
  const double hx = 0.5 * outline.width();
  const double hy = 0.5 * outline.height();
  SourceSpec src;
  src.x_nm = cx + 0.013 * hx;
  src.y_nm = cy + 0.07 * hy;
  src.polarization = Component::Ey;
  src.center_thz = 0.5 * (o.band_lo_thz + o.band_hi_thz);
  src.bandwidth_thz = 0.5 * (o.band_hi_thz - o.band_lo_thz);
  cfg.sources = {src};
  cfg.monitors = {{cx + 0.021 * hx, cy - 0.05 * hy, Component::Ey}, {cx - 0.034 * hx, cy + 0.11 * hy, Component::Ex}};
  cfg.steps = o.steps;
  cfg.snapshot = {};
  return cfg;
}

CavitySimResult simulate_cavity(const HoleList& holes, const CavitySimOptions& o) {
  if (!(o.band_hi_thz > o.band_lo_thz) || !(o.band_lo_thz > 0.0)) throw ConfigError("invalid frequency band");
  CavitySimResult out;
  out.n_eff = o.n_eff ? *o.n_eff : slab_neff(o.n_core, 1.0, {o.thickness_nm}, {o.design_wavelength_nm});
  out.grid = rasterize(holes, out.n_eff, {o.dx_nm}, {o.padding_nm});

  SimConfig cfg = cavity_ringdown_config(o, holes.outline);
  out.ringdown = run_fdtd(out.grid, cfg);
  if (out.ringdown.source_off_step + 400 > cfg.steps) {
    throw ConfigError("steps too few: the ringdown after source turn-off needs at least 400 steps");
  }

  const Frequency lo{o.band_lo_thz};
  const Frequency hi{o.band_hi_thz};
  const auto first = static_cast<std::size_t>(out.ringdown.source_off_step);
  const HarmonicInversion hi_res = harmonic_inversion(out.ringdown.traces[0].tail(first), lo, hi, 8);
  out.modes = hi_res.modes;
  for (const auto& w : hi_res.warnings) out.warnings.push_back("ringdown: " + w);
  if (out.modes.empty()) {
    out.warnings.push_back("no resonance found in band");
    return out;
  }
  const double strongest = out.modes.front().amplitude;
  const Resonance* best = nullptr;
  for (const Resonance& r : out.modes) {
    if (r.amplitude < 0.01 * strongest) continue;
    if (best == nullptr || r.q > best->q) best = &r;
  }
  out.resonance = *best;
  out.wavelength_nm = frequency_to_wavelength({best->frequency_thz}).nm;

  if (o.snapshot) {
    SimConfig pass2 = cfg;
    pass2.monitors.clear();
    pass2.snapshot.kind = SnapshotSpec::Kind::Dft;
    pass2.snapshot.frequency_thz = best->frequency_thz;
    pass2.snapshot.step = -1;
    SimResult r2 = run_fdtd(out.grid, pass2);
    out.mode = std::move(r2.snapshot);
    try {
      out.mode_volume = compute_mode_volume(*out.mode, out.grid, {o.thickness_nm}, {out.wavelength_nm}, o.n_core).value;
    } catch (const DegenerateFieldError&) {
      out.warnings.push_back("mode snapshot is zero; no mode volume");
    }
  }
  return out;
}

VacuumSpeedCheck vacuum_speed_check(double cells_per_wavelength, double wavelength_nm, double courant) {
  if (!(cells_per_wavelength >= 4.0)) throw ConfigError("cells_per_wavelength must be >= 4");
  if (!(wavelength_nm > 0.0)) throw ConfigError("wavelength must be positive");
  VacuumSpeedCheck out;
  out.cells_per_wavelength = cells_per_wavelength;
  out.wavelength_nm = wavelength_nm;
  const double dx = wavelength_nm / cells_per_wavelength;
  const int span = static_cast<int>(std::lround(10.0 * cells_per_wavelength));

  SimConfig cfg;
  cfg.courant = courant;
  cfg.boundary_y = Boundary::Pec;  // a uniform Ey plane wave satisfies PEC walls at y = const
  const int pml = cfg.pml_cells;
  const int nx = 2 * pml + span + 60;
  Grid2D grid = uniform_grid(nx, 16, {dx}, 1.0);
  const double x_src = grid.x0_nm + (pml + 10) * dx;
  const double x1 = x_src + 20 * dx;
  const double x2 = x1 + span * dx;
  out.distance_nm = span * dx;
  out.expected_delay_fs = out.distance_nm / kSpeedOfLightNmPerFs;

  const double f0 = kSpeedOfLightNmTHz / wavelength_nm;
  SourceSpec src;
  src.x_nm = x_src;
  src.polarization = Component::Ey;
  src.center_thz = f0;
  src.bandwidth_thz = f0 / 3.0;
  src.line = true;
  cfg.sources = {src};
  cfg.monitors = {{x1, 0.0, Component::Ey}, {x2, 0.0, Component::Ey}};
  const double dt = time_step_fs(grid, cfg);
  const double pulse_fs = 6.0 / (std::numbers::pi * src.bandwidth_thz * 1e-3);
  cfg.steps = static_cast<std::int64_t>(std::ceil((pulse_fs + 1.3 * (x2 - x_src) / kSpeedOfLightNmPerFs) / dt));
  const SimResult sim = run_fdtd(grid, cfg);
  const auto& a = sim.traces[0].values;
  const auto& b = sim.traces[1].values;

  // Carrier phase at f0 from each trace; the 2 pi ambiguity is resolved with the
  // cross-correlation (envelope) delay.
  std::complex<double> sa(0.0, 0.0);
  std::complex<double> sb(0.0, 0.0);
  const double w = 2.0 * std::numbers::pi * f0 * 1e-3 * dt;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const auto e = std::polar(1.0, -w * static_cast<double>(k));
    sa += a[k] * e;
    sb += b[k] * e;
  }
  const auto n = static_cast<long>(a.size());
  long best_lag = 0;
  double best = -1.0;
  std::vector<double> corr(static_cast<std::size_t>(n), 0.0);
  for (long lag = 0; lag < n; ++lag) {
    double c = 0.0;
    for (long k = 0; k + lag < n; ++k) c += a[static_cast<std::size_t>(k)] * b[static_cast<std::size_t>(k + lag)];
    corr[static_cast<std::size_t>(lag)] = c;
    if (c > best) {
      best = c;
      best_lag = lag;
    }
  }
  // The correlation oscillates at the carrier; its envelope peak follows from the
  // analytic magnitude of neighbouring samples, approximated by a parabola through
  // the local maxima one carrier period apart.
  const long period = std::max(1L, static_cast<long>(std::lround(1.0 / (f0 * 1e-3 * dt))));
  double lag_env = static_cast<double>(best_lag);
  if (best_lag - period >= 0 && best_lag + period < n) {
    const double ym = corr[static_cast<std::size_t>(best_lag - period)];
    const double y0 = corr[static_cast<std::size_t>(best_lag)];
    const double yp = corr[static_cast<std::size_t>(best_lag + period)];
    const double denom = ym - 2.0 * y0 + yp;
    if (denom < 0.0) lag_env += 0.5 * period * (ym - yp) / denom;
  }
  out.group_delay_fs = lag_env * dt;

  const double cycles = std::arg(sa / sb) / (2.0 * std::numbers::pi);
  const double turns = std::round(out.group_delay_fs * f0 * 1e-3 - cycles);
  out.phase_delay_fs = (cycles + turns) / (f0 * 1e-3);
  out.relative_error = std::abs(out.phase_delay_fs - out.expected_delay_fs) / out.expected_delay_fs;
  out.passed = out.relative_error < 0.01;
  return out;
}

}  // namespace phc
