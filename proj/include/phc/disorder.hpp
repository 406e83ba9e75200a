#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "phc/cavity.hpp"
#include "phc/fdtd2d.hpp"
#include "phc/geometry.hpp"
#include "phc/json_util.hpp"

namespace phc {

struct DisorderModel {
  double sigma_r_nm = 0.0;   ///< hole radius jitter
  double sigma_xy_nm = 0.0;  ///< isotropic hole position jitter, per axis
  double sigma_d_nm = 1.0;   ///< film thickness jitter
  std::uint64_t seed = 0;
};

void validate(const DisorderModel& m);

/// mt19937_64 keyed by seed_seq{seed, stream, substream} with a Box-Muller
/// transform; std::normal_distribution is implementation defined, this is not.
class NormalStream {
public:
  NormalStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0);
  double next();

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
  double uniform();  ///< (0, 1)
};

/// Jitters radii (normal, redrawn below r/2) and positions. Deterministic in
/// (m.seed, sample_index). A warning is attached when > 1% of holes hit the truncation.
HoleList perturb(const HoleList& holes, const DisorderModel& m, std::uint64_t sample_index);

/// First-order shift dlambda/lambda = (1/2) sum(d_eps |E|^2) / sum(eps |E|^2).
/// `intensity` is |E|^2 (EIntensity) or a field component that gets squared.
double resonance_shift_perturbation(const FieldSnapshot& mode, const Raster& eps_base, const Raster& eps_perturbed);

/// Everything yield_study needs that is computed once: the unperturbed mode on the
/// rasterized grid plus the Q model constants.
struct YieldBaseline {
  HoleList holes;
  double lattice_nm = 0.0;
  double n_core = kDiamondIndex;
  double thickness_nm = 160.0;
  double wavelength_nm = 0.0;  ///< unperturbed resonance
  double design_wavelength_nm = 737.0;  ///< where n_eff(d) is evaluated for every sample
  double dx_nm = 0.0;
  double padding_nm = 0.0;
  Grid2D grid;                 ///< rasterize(holes, slab_neff(d at design wavelength), dx, padding)
  FieldSnapshot mode;          ///< |E|^2 at the resonance, same shape as grid.eps
  double q_base = 0.0;
  double alpha = 0.0;          ///< 1/Q = 1/Q_base + alpha (sigma_eff / a)^2
};

/// Rasterizes the baseline permittivity so later samples share its grid exactly.
Grid2D baseline_grid(const HoleList& holes, double n_core, double thickness_nm, double design_wavelength_nm,
                     double dx_nm, double padding_nm);

/// Runs the two-pass cavity simulation (snapshot forced on) and packages the
/// result. Throws PreconditionError when no resonance or mode is found.
YieldBaseline make_yield_baseline(const HoleList& holes, const CavitySimOptions& options, double alpha);

/// Least-squares alpha through the origin from direct runs (sigma_eff_nm, q).
double calibrate_alpha(double q_base, double lattice_nm, const std::vector<std::pair<double, double>>& runs);

struct YieldCriteria {
  double q_threshold = 2e4;
  double wavelength_tol_percent = 2.9;
};

struct Proportion {
  int successes = 0;
  int trials = 0;
  double fraction = 0.0;
  double lower = 0.0;  ///< Wilson score interval, z = 1.96
  double upper = 0.0;
};

Proportion wilson_interval(int successes, int trials, double z = 1.96);

struct YieldRecord {
  std::uint64_t sample = 0;
  double dlambda_nm = 0.0;
  double q_est = 0.0;
  double sigma_eff_nm = 0.0;
  double n_eff = 0.0;
};

struct YieldReport {
  DisorderModel model;
  YieldCriteria criteria;
  int n_samples = 0;
  double baseline_wavelength_nm = 0.0;
  double q_base = 0.0;
  double alpha = 0.0;
  Proportion q_above;
  Proportion wavelength_within;
  Proportion both;
  std::vector<YieldRecord> records;  ///< ordered by sample index
  std::vector<std::string> notes;
};

/// Throws PreconditionError when the baseline mode is missing or misaligned.
YieldReport yield_study(const YieldBaseline& baseline, const DisorderModel& m, int n_samples,
                        const YieldCriteria& criteria);

Json to_json(const YieldReport& report);
/// "sample,dlambda_nm,q_est"
std::string records_to_csv(const YieldReport& report);

}  // namespace phc
