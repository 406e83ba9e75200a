#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "phc/geometry.hpp"
#include "phc/signal.hpp"
#include "phc/units.hpp"
#include "phc/wave1d.hpp"

namespace phc {

/// Row-major raster indexed (row = y, column = x).
using Raster = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Square-cell permittivity map. Cell (row j, column i) covers
/// [x0 + i dx, x0 + (i+1) dx] x [y0 + j dx, y0 + (j+1) dx].
struct Grid2D {
  double dx_nm = 0.0;
  double x0_nm = 0.0;
  double y0_nm = 0.0;
  Raster eps;

  int nx() const { return static_cast<int>(eps.cols()); }
  int ny() const { return static_cast<int>(eps.rows()); }
  double cell_x(int i) const { return x0_nm + (i + 0.5) * dx_nm; }
  double cell_y(int j) const { return y0_nm + (j + 0.5) * dx_nm; }
};

/// Uniform permittivity grid centered on the origin.
Grid2D uniform_grid(int nx, int ny, Nanometers dx, double eps);

/// Area-weighted permittivity (subsamples x subsamples per cell). Host material fills
/// the outline (and the padding along open axes) with n_eff^2; holes and the rest are 1.
/// Throws ConfigError when dx > r/4 for the smallest non-zero hole, unless the guard is
/// off (perturbed copies of a geometry that already passed it).
Grid2D rasterize(const HoleList& holes, double n_eff, Nanometers dx, Nanometers padding, int subsamples = 4,
                 bool resolution_guard = true);

/// Planar stack along x (layers in order, starting at x = 0) with `margin` of
/// ambient/exit medium on either side; uniform along y. Cells straddling an
/// interface take the length-weighted average permittivity.
Grid2D layered_grid(const LayerStack& stack, Nanometers dx, Nanometers margin, int ny = 16);

/// Raster ids double as the FSNP component field; 0 is the permittivity map.
enum class Component : std::uint32_t { Eps = 0, Ex = 1, Ey = 2, Hz = 3, EIntensity = 4 };

enum class Boundary { Pml, Pec };

/// Gaussian-modulated sinusoid exp(-((t-t0)/tau)^2) sin(2 pi f (t - t0)) with
/// tau = 1 / (pi * bandwidth), i.e. the amplitude spectrum falls to 1/e at
/// center +- bandwidth. The pulse is centered at t0 = 3 tau and switched off at 6 tau.
struct SourceSpec {
  double x_nm = 0.0;
  double y_nm = 0.0;
  Component polarization = Component::Ey;
  double center_thz = 400.0;
  double bandwidth_thz = 50.0;
  double amplitude = 1.0;
  bool line = false;  ///< drive the whole grid column through x_nm (plane wave along x)
};

struct Monitor {
  double x_nm = 0.0;
  double y_nm = 0.0;
  Component component = Component::Ey;
};

struct SnapshotSpec {
  enum class Kind { None, Instant, Dft };
  Kind kind = Kind::None;
  Component component = Component::Ey;
  /// Instant: step at which the field is copied. Dft: first accumulated step
  /// (negative means the source turn-off step).
  std::int64_t step = -1;
  double frequency_thz = 0.0;  ///< Dft only; the result is |E(f)|^2 at cell centers
};

struct SimConfig {
  double courant = 0.5;  ///< fraction of the 2D limit dx / (c sqrt 2)
  /// Diagnostic runs only: accept courant >= 1 so the divergence path can be exercised.
  bool allow_unstable = false;
  int pml_cells = 12;
  int pml_order = 3;
  double pml_reflection = 1e-6;
  Boundary boundary_x = Boundary::Pml;
  Boundary boundary_y = Boundary::Pml;
  std::vector<SourceSpec> sources;
  std::int64_t steps = 1000;
  std::vector<Monitor> monitors;
  SnapshotSpec snapshot;
  bool record_energy = false;
  /// Steps between blow-up checks (|field| > 1e12 x source amplitude).
  int divergence_check_interval = 16;
};

/// Throws ConfigError naming the violated constraint.
void validate(const SimConfig& cfg);

struct FieldSnapshot {
  Component component = Component::Ey;
  std::int64_t step = 0;
  Raster values;
};

struct SimResult {
  std::vector<TimeTrace> traces;  ///< one per monitor, femtoseconds
  std::optional<FieldSnapshot> snapshot;
  std::vector<double> energy;     ///< conserved discrete energy per step when requested
  double dt_fs = 0.0;
  std::int64_t source_off_step = 0;
};

double time_step_fs(const Grid2D& grid, const SimConfig& cfg);

/// Leapfrog Yee update of (Ex, Ey, Hz) with CPML or PEC walls. Throws
/// DivergenceError naming the step when the field blows up.
SimResult run_fdtd(const Grid2D& grid, const SimConfig& cfg);

/// V = h_eff * sum(eps |E|^2) dA / max(eps |E|^2), in nm^3.
double mode_volume_nm3(const FieldSnapshot& snapshot, const Grid2D& grid, Nanometers h_eff);

/// Same quantity in units of (lambda / n_ref)^3. Throws DegenerateFieldError for a zero field.
ModeVolume compute_mode_volume(const FieldSnapshot& snapshot, const Grid2D& grid, Nanometers h_eff,
                               Wavelength wavelength, double n_ref = kDiamondIndex);

}  // namespace phc
