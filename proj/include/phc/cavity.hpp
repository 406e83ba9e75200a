#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phc/fdtd2d.hpp"
#include "phc/specfit.hpp"

namespace phc {

/// Two-pass effective-index cavity run: a broadband ringdown analysed by harmonic
/// inversion, then (optionally) a DFT snapshot at the selected resonance.
struct CavitySimOptions {
  double n_core = kDiamondIndex;
  double thickness_nm = 160.0;
  double design_wavelength_nm = 737.0;  ///< where n_eff is evaluated
  std::optional<double> n_eff;          ///< overrides the slab solve
  double dx_nm = 16.0;
  double padding_nm = 600.0;
  double band_lo_thz = 300.0;
  double band_hi_thz = 500.0;
  std::int64_t steps = 30000;
  SimConfig base;          ///< courant and PML settings; sources/monitors are filled in
  bool snapshot = true;
};

struct CavitySimResult {
  double n_eff = 0.0;
  Grid2D grid;
  std::vector<Resonance> modes;  ///< in band, strongest first
  std::optional<Resonance> resonance;
  double wavelength_nm = 0.0;
  std::optional<FieldSnapshot> mode;  ///< |E|^2 at the resonance
  std::optional<double> mode_volume;  ///< (lambda / n_core)^3
  SimResult ringdown;
  std::vector<std::string> warnings;
};

/// Source and monitors sit slightly off the cavity center so that modes of either
/// parity are excited and observed.
SimConfig cavity_ringdown_config(const CavitySimOptions& options, const Outline& outline);

/// Resonance choice: the highest-Q mode among those with at least 1% of the
/// strongest in-band amplitude.
CavitySimResult simulate_cavity(const HoleList& holes, const CavitySimOptions& options);

/// Plane-wave pulse in vacuum between two monitors `distance` apart. The check
/// compares the carrier phase delay with distance / c; the envelope (group) delay
/// is reported alongside since Yee dispersion slows it about 3x more.
struct VacuumSpeedCheck {
  double cells_per_wavelength = 20.0;
  double wavelength_nm = 737.0;
  double distance_nm = 0.0;
  double expected_delay_fs = 0.0;
  double phase_delay_fs = 0.0;
  double group_delay_fs = 0.0;
  double relative_error = 0.0;  ///< phase delay against distance / c
  bool passed = false;          ///< relative_error < 1%
};

VacuumSpeedCheck vacuum_speed_check(double cells_per_wavelength = 20.0, double wavelength_nm = 737.0,
                                    double courant = 0.5);

}  // namespace phc
