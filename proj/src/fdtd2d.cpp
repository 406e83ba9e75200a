#include "phc/fdtd2d.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "phc/error.hpp"
#include "phc/parallel.hpp"

namespace phc {

namespace {

constexpr double kBlowUpFactor = 1e12;

struct IndexPair {
  int row;
  int col;
};

// Per-position CPML recursion coefficients along one axis (kappa = 1, alpha = 0).
struct PmlAxis {
  std::vector<double> b;
  std::vector<double> c;
  std::vector<int> active;  // indices with non-zero absorption
};

PmlAxis make_pml_axis(int count, double offset, int n_cells, int pml, int order, double reflection,
                      double courant_s, bool enabled) {
  PmlAxis axis;
  axis.b.assign(static_cast<std::size_t>(count), 1.0);
  axis.c.assign(static_cast<std::size_t>(count), 0.0);
  if (!enabled) return axis;
  const double sigma_max = -(order + 1) * std::log(reflection) / (2.0 * pml);
  for (int k = 0; k < count; ++k) {
    const double pos = k + offset;
    double depth = 0.0;
    if (pos < pml) depth = pml - pos;
    if (pos > n_cells - pml) depth = pos - (n_cells - pml);
    if (depth <= 0.0) continue;
    depth = std::min(depth, static_cast<double>(pml));
    const double sigma = sigma_max * std::pow(depth / pml, order);
    const double b = std::exp(-sigma * courant_s);
    axis.b[static_cast<std::size_t>(k)] = b;
    axis.c[static_cast<std::size_t>(k)] = b - 1.0;
    axis.active.push_back(k);
  }
  return axis;
}

double source_tau_fs(const SourceSpec& s) { return 1.0 / (M_PI * s.bandwidth_thz * 1e-3); }

double source_value(const SourceSpec& s, double t_fs) {
  const double tau = source_tau_fs(s);
  const double t0 = 3.0 * tau;
  if (t_fs < 0.0 || t_fs > 6.0 * tau) return 0.0;
  const double u = (t_fs - t0) / tau;
  return s.amplitude * std::exp(-u * u) * std::sin(2.0 * M_PI * s.center_thz * 1e-3 * (t_fs - t0));
}

int clamp_index(int v, int lo, int hi) { return std::max(lo, std::min(v, hi)); }

// Native Yee location nearest to a physical point for the given component.
IndexPair locate(const Grid2D& g, Component c, double x_nm, double y_nm) {
  const double fx = (x_nm - g.x0_nm) / g.dx_nm;
  const double fy = (y_nm - g.y0_nm) / g.dx_nm;
  if (!(fx >= 0.0 && fx <= g.nx() && fy >= 0.0 && fy <= g.ny())) {
    throw ConfigError("point (" + std::to_string(x_nm) + ", " + std::to_string(y_nm) + ") nm lies outside the grid");
  }
  switch (c) {
    case Component::Ex:
      return {clamp_index(static_cast<int>(std::lround(fy)), 1, g.ny() - 1),
              clamp_index(static_cast<int>(std::floor(fx)), 0, g.nx() - 1)};
    case Component::Ey:
      return {clamp_index(static_cast<int>(std::floor(fy)), 0, g.ny() - 1),
              clamp_index(static_cast<int>(std::lround(fx)), 1, g.nx() - 1)};
    case Component::Hz:
      return {clamp_index(static_cast<int>(std::floor(fy)), 0, g.ny() - 1),
              clamp_index(static_cast<int>(std::floor(fx)), 0, g.nx() - 1)};
    default:
      throw ConfigError("sources and monitors must use Ex, Ey or Hz");
  }
}

}  // namespace

Grid2D uniform_grid(int nx, int ny, Nanometers dx, double eps) {
  if (nx < 1 || ny < 1 || !(dx.value > 0.0)) throw ConfigError("grid needs positive size and spacing");
  Grid2D g;
  g.dx_nm = dx.value;
  g.x0_nm = -0.5 * nx * dx.value;
  g.y0_nm = -0.5 * ny * dx.value;
  g.eps = Raster::Constant(ny, nx, eps);
  return g;
}

Grid2D rasterize(const HoleList& list, double n_eff, Nanometers dx, Nanometers padding, int subsamples,
                 bool resolution_guard) {
  if (!(dx.value > 0.0)) throw ConfigError("dx must be positive");
  if (!(padding.value >= 0.0)) throw ConfigError("padding must be non-negative");
  if (subsamples < 1) throw ConfigError("subsamples must be >= 1");
  if (!(n_eff >= 1.0)) throw ConfigError("n_eff must be >= 1");
  double r_min = std::numeric_limits<double>::infinity();
  for (const Hole& h : list.holes) {
    if (h.r_nm > 0.0) r_min = std::min(r_min, h.r_nm);
  }
  if (resolution_guard && std::isfinite(r_min) && dx.value > r_min / 4.0) {
    throw ConfigError("resolution guard: dx = " + std::to_string(dx.value) + " nm exceeds r/4 = " +
                      std::to_string(r_min / 4.0) + " nm");
  }

  const Outline& o = list.outline;
  const double width = o.width() + 2.0 * padding.value;
  const double height = o.height() + 2.0 * padding.value;
  const int nx = std::max(16, static_cast<int>(std::ceil(width / dx.value - 1e-9)));
  const int ny = std::max(16, static_cast<int>(std::ceil(height / dx.value - 1e-9)));

  Grid2D g;
  g.dx_nm = dx.value;
  g.x0_nm = 0.5 * (o.x_min_nm + o.x_max_nm) - 0.5 * nx * dx.value;
  g.y0_nm = 0.5 * (o.y_min_nm + o.y_max_nm) - 0.5 * ny * dx.value;

  const int s = subsamples;
  const double sub = dx.value / s;
  auto in_host = [&](double x, double y) {
    return (o.open_x || (x >= o.x_min_nm && x <= o.x_max_nm)) && (o.open_y || (y >= o.y_min_nm && y <= o.y_max_nm));
  };
  auto sub_x = [&](int i, int a) { return g.x0_nm + i * dx.value + (a + 0.5) * sub; };
  auto sub_y = [&](int j, int b) { return g.y0_nm + j * dx.value + (b + 0.5) * sub; };

  Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> count(ny, nx);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      int c = 0;
      for (int b = 0; b < s; ++b) {
        for (int a = 0; a < s; ++a) c += in_host(sub_x(i, a), sub_y(j, b)) ? 1 : 0;
      }
      count(j, i) = c;
    }
  }

  for (const Hole& h : list.holes) {
    if (!(h.r_nm > 0.0)) continue;
    const int i_lo = std::max(0, static_cast<int>(std::floor((h.x_nm - h.r_nm - g.x0_nm) / dx.value)));
    const int i_hi = std::min(nx - 1, static_cast<int>(std::floor((h.x_nm + h.r_nm - g.x0_nm) / dx.value)));
    const int j_lo = std::max(0, static_cast<int>(std::floor((h.y_nm - h.r_nm - g.y0_nm) / dx.value)));
    const int j_hi = std::min(ny - 1, static_cast<int>(std::floor((h.y_nm + h.r_nm - g.y0_nm) / dx.value)));
    const double r2 = h.r_nm * h.r_nm;
    for (int j = j_lo; j <= j_hi; ++j) {
      for (int i = i_lo; i <= i_hi; ++i) {
        int removed = 0;
        for (int b = 0; b < s; ++b) {
          const double y = sub_y(j, b);
          const double ddy = y - h.y_nm;
          for (int a = 0; a < s; ++a) {
            const double x = sub_x(i, a);
            const double ddx = x - h.x_nm;
            if (ddx * ddx + ddy * ddy < r2 && in_host(x, y)) ++removed;
          }
        }
        count(j, i) = std::max(0, count(j, i) - removed);
      }
    }
  }

  const double contrast = n_eff * n_eff - 1.0;
  g.eps = 1.0 + contrast * count.cast<double>() / static_cast<double>(s * s);
  return g;
}

Grid2D layered_grid(const LayerStack& stack, Nanometers dx, Nanometers margin, int ny) {
  if (!(dx.value > 0.0) || !(margin.value >= 0.0) || ny < 1) throw ConfigError("invalid layered grid parameters");
  // Interfaces along x: ambient up to 0, then the layers, then the exit medium.
  std::vector<double> bounds{0.0};
  std::vector<double> eps{stack.ambient_n * stack.ambient_n};
  for (const Layer& l : stack.layers) {
    if (!(l.thickness_nm >= 0.0) || !(l.n >= 1.0)) throw ConfigError("layers need n >= 1 and thickness >= 0");
    bounds.push_back(bounds.back() + l.thickness_nm);
    eps.push_back(l.n * l.n);
  }
  eps.push_back(stack.exit_index() * stack.exit_index());
  const double total = bounds.back();
  const int nx = static_cast<int>(std::ceil((total + 2.0 * margin.value) / dx.value - 1e-9));
  Grid2D g;
  g.dx_nm = dx.value;
  g.x0_nm = -margin.value;
  g.y0_nm = -0.5 * ny * dx.value;
  g.eps = Raster::Zero(ny, nx);
  for (int i = 0; i < nx; ++i) {
    const double x0 = g.x0_nm + i * dx.value;
    const double x1 = x0 + dx.value;
    double acc = 0.0;
    // Region k spans [bounds[k-1], bounds[k]] with bounds[-1] = -inf and bounds[end] = +inf.
    for (std::size_t k = 0; k < eps.size(); ++k) {
      const double lo = k == 0 ? -std::numeric_limits<double>::infinity() : bounds[k - 1];
      const double hi = k < bounds.size() ? bounds[k] : std::numeric_limits<double>::infinity();
      const double overlap = std::min(x1, hi) - std::max(x0, lo);
      if (overlap > 0.0) acc += overlap * eps[k];
    }
    g.eps.col(i).setConstant(acc / dx.value);
  }
  return g;
}

void validate(const SimConfig& cfg) {
  if (!(cfg.courant > 0.0) || (!cfg.allow_unstable && !(cfg.courant < 1.0))) {
    throw ConfigError("courant must lie in (0, 1)");
  }
  const bool any_pml = cfg.boundary_x == Boundary::Pml || cfg.boundary_y == Boundary::Pml;
  if (any_pml && cfg.pml_cells < 4) throw ConfigError("pml_cells must be >= 4");
  if (any_pml && !(cfg.pml_reflection > 0.0 && cfg.pml_reflection < 1.0)) {
    throw ConfigError("pml_reflection must lie in (0, 1)");
  }
  if (cfg.pml_order < 1) throw ConfigError("pml_order must be >= 1");
  if (cfg.steps < 1) throw ConfigError("steps must be >= 1");
  if (cfg.sources.empty()) throw ConfigError("at least one source is required");
  for (const SourceSpec& s : cfg.sources) {
    if (!(s.bandwidth_thz > 0.0)) throw ConfigError("source bandwidth must be positive");
    if (!(s.center_thz >= 0.0)) throw ConfigError("source center frequency must be non-negative");
  }
  if (cfg.snapshot.kind == SnapshotSpec::Kind::Dft && !(cfg.snapshot.frequency_thz > 0.0)) {
    throw ConfigError("DFT snapshot needs a positive frequency");
  }
  if (cfg.divergence_check_interval < 1) throw ConfigError("divergence_check_interval must be >= 1");
}

double time_step_fs(const Grid2D& grid, const SimConfig& cfg) {
  return cfg.courant / std::sqrt(2.0) * grid.dx_nm / kSpeedOfLightNmPerFs;
}

SimResult run_fdtd(const Grid2D& grid, const SimConfig& cfg) {
  validate(cfg);
  const int nx = grid.nx();
  const int ny = grid.ny();
  if (nx < 16 || ny < 16) throw ConfigError("grid must be at least 16 x 16 cells");
  if (!(grid.dx_nm > 0.0)) throw ConfigError("grid spacing must be positive");
  if (!(grid.eps.minCoeff() >= 1.0) || !std::isfinite(grid.eps.maxCoeff())) {
    throw ConfigError("permittivity must be finite and >= 1");
  }
  const bool pml_x = cfg.boundary_x == Boundary::Pml;
  const bool pml_y = cfg.boundary_y == Boundary::Pml;
  if ((pml_x && 2 * cfg.pml_cells >= nx) || (pml_y && 2 * cfg.pml_cells >= ny)) {
    throw ConfigError("grid too small for the requested PML thickness");
  }

  const double S = cfg.courant / std::sqrt(2.0);  // c dt / dx
  const double dt = time_step_fs(grid, cfg);
  const int threads = worker_count();

  // Inverse permittivity at the native E locations (arithmetic mean of neighbours).
  Raster inv_ex = Raster::Zero(ny + 1, nx);
  Raster inv_ey = Raster::Zero(ny, nx + 1);
  for (int j = 1; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) inv_ex(j, i) = 2.0 / (grid.eps(j - 1, i) + grid.eps(j, i));
  }
  for (int j = 0; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) inv_ey(j, i) = 2.0 / (grid.eps(j, i - 1) + grid.eps(j, i));
  }

  const int P = cfg.pml_cells;
  const PmlAxis x_h = make_pml_axis(nx, 0.5, nx, P, cfg.pml_order, cfg.pml_reflection, S, pml_x);
  const PmlAxis y_h = make_pml_axis(ny, 0.5, ny, P, cfg.pml_order, cfg.pml_reflection, S, pml_y);
  const PmlAxis x_e = make_pml_axis(nx + 1, 0.0, nx, P, cfg.pml_order, cfg.pml_reflection, S, pml_x);
  const PmlAxis y_e = make_pml_axis(ny + 1, 0.0, ny, P, cfg.pml_order, cfg.pml_reflection, S, pml_y);

  Raster hz = Raster::Zero(ny, nx);
  Raster ex = Raster::Zero(ny + 1, nx);
  Raster ey = Raster::Zero(ny, nx + 1);
  Raster psi_hz_x = Raster::Zero(ny, nx);
  Raster psi_hz_y = Raster::Zero(ny, nx);
  Raster psi_ex_y = Raster::Zero(ny + 1, nx);
  Raster psi_ey_x = Raster::Zero(ny, nx + 1);
  Raster hz_prev;

  struct ActiveSource {
    SourceSpec spec;
    IndexPair at;
  };
  std::vector<ActiveSource> sources;
  double amp_max = 0.0;
  std::int64_t off_step = 0;
  for (const SourceSpec& s : cfg.sources) {
    sources.push_back({s, locate(grid, s.polarization, s.x_nm, s.y_nm)});
    amp_max = std::max(amp_max, std::abs(s.amplitude));
    off_step = std::max(off_step, static_cast<std::int64_t>(std::ceil(6.0 * source_tau_fs(s) / dt)));
  }
  const double blow_up = kBlowUpFactor * std::max(amp_max, std::numeric_limits<double>::min());

  std::vector<IndexPair> probes;
  SimResult result;
  result.dt_fs = dt;
  result.source_off_step = off_step;
  for (const Monitor& m : cfg.monitors) {
    probes.push_back(locate(grid, m.component, m.x_nm, m.y_nm));
    TimeTrace tr;
    tr.unit = TimeUnit::Femtoseconds;
    tr.dt = dt;
    tr.t0 = m.component == Component::Hz ? 0.5 * dt : dt;
    tr.values.reserve(static_cast<std::size_t>(cfg.steps));
    result.traces.push_back(std::move(tr));
  }

  // DFT accumulators at native E locations.
  const bool want_dft = cfg.snapshot.kind == SnapshotSpec::Kind::Dft;
  using ComplexRaster = Eigen::Array<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  ComplexRaster dft_ex;
  ComplexRaster dft_ey;
  std::int64_t dft_start = 0;
  std::int64_t dft_stride = 1;
  if (want_dft) {
    dft_ex = ComplexRaster::Zero(ny + 1, nx);
    dft_ey = ComplexRaster::Zero(ny, nx + 1);
    dft_start = cfg.snapshot.step < 0 ? off_step : cfg.snapshot.step;
    const double period_steps = 1.0 / (cfg.snapshot.frequency_thz * 1e-3 * dt);
    dft_stride = std::max<std::int64_t>(1, static_cast<std::int64_t>(period_steps / 8.0));
  }

  auto interior_e = [&](const Raster& e, bool along_y, int j, int i) {
    return along_y ? 0.5 * (e(j, i) + e(j + 1, i)) : 0.5 * (e(j, i) + e(j, i + 1));
  };

  for (std::int64_t n = 0; n < cfg.steps; ++n) {
    if (cfg.record_energy) hz_prev = hz;

    // H^{n+1/2} from E^n.
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        hz(j, i) += S * ((ex(j + 1, i) - ex(j, i)) - (ey(j, i + 1) - ey(j, i)));
      }
    }
    if (pml_x) {
#pragma omp parallel for schedule(static) num_threads(threads)
      for (int j = 0; j < ny; ++j) {
        for (int i : x_h.active) {
          const double d = ey(j, i + 1) - ey(j, i);
          psi_hz_x(j, i) = x_h.b[i] * psi_hz_x(j, i) + x_h.c[i] * d;
          hz(j, i) -= S * psi_hz_x(j, i);
        }
      }
    }
    if (pml_y) {
      for (int j : y_h.active) {
        for (int i = 0; i < nx; ++i) {
          const double d = ex(j + 1, i) - ex(j, i);
          psi_hz_y(j, i) = y_h.b[j] * psi_hz_y(j, i) + y_h.c[j] * d;
          hz(j, i) += S * psi_hz_y(j, i);
        }
      }
    }
    const double t_h = static_cast<double>(n) * dt;
    for (const ActiveSource& s : sources) {
      if (s.spec.polarization != Component::Hz) continue;
      const double v = S * source_value(s.spec, t_h);
      if (s.spec.line) {
        for (int j = 0; j < ny; ++j) hz(j, s.at.col) += v;
      } else {
        hz(s.at.row, s.at.col) += v;
      }
    }

    if (cfg.record_energy) {
      double w = 0.0;
      for (int j = 1; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) w += ex(j, i) * ex(j, i) / inv_ex(j, i);
      }
      for (int j = 0; j < ny; ++j) {
        for (int i = 1; i < nx; ++i) w += ey(j, i) * ey(j, i) / inv_ey(j, i);
      }
      for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) w += hz_prev(j, i) * hz(j, i);
      }
      result.energy.push_back(0.5 * w);
    }

    // E^{n+1} from H^{n+1/2}; the outermost tangential E stays zero (PEC backing).
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int j = 1; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) ex(j, i) += S * inv_ex(j, i) * (hz(j, i) - hz(j - 1, i));
    }
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int j = 0; j < ny; ++j) {
      for (int i = 1; i < nx; ++i) ey(j, i) -= S * inv_ey(j, i) * (hz(j, i) - hz(j, i - 1));
    }
    if (pml_y) {
      for (int j : y_e.active) {
        if (j < 1 || j > ny - 1) continue;
        for (int i = 0; i < nx; ++i) {
          const double d = hz(j, i) - hz(j - 1, i);
          psi_ex_y(j, i) = y_e.b[j] * psi_ex_y(j, i) + y_e.c[j] * d;
          ex(j, i) += S * inv_ex(j, i) * psi_ex_y(j, i);
        }
      }
    }
    if (pml_x) {
#pragma omp parallel for schedule(static) num_threads(threads)
      for (int j = 0; j < ny; ++j) {
        for (int i : x_e.active) {
          if (i < 1 || i > nx - 1) continue;
          const double d = hz(j, i) - hz(j, i - 1);
          psi_ey_x(j, i) = x_e.b[i] * psi_ey_x(j, i) + x_e.c[i] * d;
          ey(j, i) -= S * inv_ey(j, i) * psi_ey_x(j, i);
        }
      }
    }
    const double t_e = (static_cast<double>(n) + 0.5) * dt;
    for (const ActiveSource& s : sources) {
      const double v = source_value(s.spec, t_e);
      if (v == 0.0) continue;
      if (s.spec.polarization == Component::Ex) {
        if (s.spec.line) {
          for (int j = 1; j < ny; ++j) ex(j, s.at.col) -= S * inv_ex(j, s.at.col) * v;
        } else {
          ex(s.at.row, s.at.col) -= S * inv_ex(s.at.row, s.at.col) * v;
        }
      } else if (s.spec.polarization == Component::Ey) {
        if (s.spec.line) {
          for (int j = 0; j < ny; ++j) ey(j, s.at.col) -= S * inv_ey(j, s.at.col) * v;
        } else {
          ey(s.at.row, s.at.col) -= S * inv_ey(s.at.row, s.at.col) * v;
        }
      }
    }

    for (std::size_t m = 0; m < probes.size(); ++m) {
      const IndexPair p = probes[m];
      double v = 0.0;
      switch (cfg.monitors[m].component) {
        case Component::Ex: v = ex(p.row, p.col); break;
        case Component::Ey: v = ey(p.row, p.col); break;
        default: v = hz(p.row, p.col); break;
      }
      result.traces[m].values.push_back(v);
    }

    if (want_dft && n >= dft_start && (n - dft_start) % dft_stride == 0) {
      const double t = static_cast<double>(n + 1) * dt;
      const std::complex<double> phase = std::polar(1.0, -2.0 * M_PI * cfg.snapshot.frequency_thz * 1e-3 * t);
      dft_ex += ex.cast<std::complex<double>>() * phase;
      dft_ey += ey.cast<std::complex<double>>() * phase;
    }

    if (cfg.snapshot.kind == SnapshotSpec::Kind::Instant && n == cfg.snapshot.step) {
      FieldSnapshot snap;
      snap.component = cfg.snapshot.component;
      snap.step = n;
      snap.values.resize(ny, nx);
      for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
          const double exc = interior_e(ex, true, j, i);
          const double eyc = interior_e(ey, false, j, i);
          switch (cfg.snapshot.component) {
            case Component::Ex: snap.values(j, i) = exc; break;
            case Component::Ey: snap.values(j, i) = eyc; break;
            case Component::Hz: snap.values(j, i) = hz(j, i); break;
            case Component::EIntensity:
              snap.values(j, i) = 0.5 * (ex(j, i) * ex(j, i) + ex(j + 1, i) * ex(j + 1, i)) +
                                  0.5 * (ey(j, i) * ey(j, i) + ey(j, i + 1) * ey(j, i + 1));
              break;
            case Component::Eps: snap.values(j, i) = grid.eps(j, i); break;
          }
        }
      }
      result.snapshot = std::move(snap);
    }

    if ((n + 1) % cfg.divergence_check_interval == 0 || n + 1 == cfg.steps) {
      const double peak = std::max({hz.abs().maxCoeff(), ex.abs().maxCoeff(), ey.abs().maxCoeff()});
      if (!(peak <= blow_up)) throw DivergenceError(n);
    }
  }

  if (want_dft) {
    FieldSnapshot snap;
    snap.component = Component::EIntensity;
    snap.step = dft_start;
    snap.values.resize(ny, nx);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        snap.values(j, i) = 0.5 * (std::norm(dft_ex(j, i)) + std::norm(dft_ex(j + 1, i))) +
                            0.5 * (std::norm(dft_ey(j, i)) + std::norm(dft_ey(j, i + 1)));
      }
    }
    result.snapshot = std::move(snap);
  }
  return result;
}

double mode_volume_nm3(const FieldSnapshot& snapshot, const Grid2D& grid, Nanometers h_eff) {
  if (snapshot.values.rows() != grid.eps.rows() || snapshot.values.cols() != grid.eps.cols()) {
    throw ConfigError("snapshot and grid dimensions differ");
  }
  Raster density;
  switch (snapshot.component) {
    case Component::EIntensity: density = grid.eps * snapshot.values; break;
    case Component::Ex:
    case Component::Ey: density = grid.eps * snapshot.values.square(); break;
    default: throw ConfigError("mode volume needs an electric-field snapshot");
  }
  const double peak = density.maxCoeff();
  if (!(peak > 0.0)) throw DegenerateFieldError("field is identically zero");
  return h_eff.value * density.sum() * grid.dx_nm * grid.dx_nm / peak;
}

ModeVolume compute_mode_volume(const FieldSnapshot& snapshot, const Grid2D& grid, Nanometers h_eff,
                               Wavelength wavelength, double n_ref) {
  if (!(wavelength.nm > 0.0) || !(n_ref > 0.0)) throw DomainError("wavelength and n_ref must be positive");
  const double unit = std::pow(wavelength.nm / n_ref, 3);
  return {mode_volume_nm3(snapshot, grid, h_eff) / unit, n_ref};
}

}  // namespace phc
