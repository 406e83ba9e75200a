#include "phc/disorder.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>

#include "phc/error.hpp"
#include "phc/format.hpp"
#include "phc/parallel.hpp"
#include "phc/wave1d.hpp"

namespace phc {

namespace {

std::seed_seq make_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xFFFFFFFFu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  return std::seed_seq{lo(seed), hi(seed), lo(stream), hi(stream), lo(substream), hi(substream)};
}

constexpr std::uint64_t kHoleStream = 0;
constexpr std::uint64_t kThicknessStream = 1;

}  // namespace

void validate(const DisorderModel& m) {
  if (!(m.sigma_r_nm >= 0.0) || !(m.sigma_xy_nm >= 0.0) || !(m.sigma_d_nm >= 0.0)) {
    throw DomainError("disorder sigmas must be >= 0");
  }
}

NormalStream::NormalStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream) {
  auto seq = make_seed(seed, stream, substream);
  engine_.seed(seq);
}

double NormalStream::uniform() {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double NormalStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double rho = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = rho * std::sin(theta);
  has_spare_ = true;
  return rho * std::cos(theta);
}

HoleList perturb(const HoleList& holes, const DisorderModel& m, std::uint64_t sample_index) {
  validate(m);
  NormalStream rng(m.seed, sample_index, kHoleStream);
  HoleList out = holes;
  std::size_t truncated = 0;
  for (Hole& h : out.holes) {
    const double r0 = h.r_nm;
    double r = r0 + m.sigma_r_nm * rng.next();
    int redraws = 0;
    while (r < 0.5 * r0) {
      ++redraws;
      if (redraws > 1000) {
        r = 0.5 * r0;
        break;
      }
      r = r0 + m.sigma_r_nm * rng.next();
    }
    if (redraws > 0) ++truncated;
    h.r_nm = r;
    h.x_nm += m.sigma_xy_nm * rng.next();
    h.y_nm += m.sigma_xy_nm * rng.next();
  }
  if (!out.holes.empty() && truncated * 100 > out.holes.size()) {
    out.warnings.push_back("radius truncation at r/2 hit " + std::to_string(truncated) + " of " +
                           std::to_string(out.holes.size()) + " holes");
  }
  out.provenance = holes.provenance + "; perturbed seed=" + std::to_string(m.seed) +
                   " sample=" + std::to_string(sample_index);
  return out;
}

double resonance_shift_perturbation(const FieldSnapshot& mode, const Raster& eps_base, const Raster& eps_perturbed) {
  if (mode.values.rows() != eps_base.rows() || mode.values.cols() != eps_base.cols() ||
      eps_perturbed.rows() != eps_base.rows() || eps_perturbed.cols() != eps_base.cols()) {
    throw DomainError("perturbation rasters are not aligned with the mode");
  }
  const Raster e2 = mode.component == Component::EIntensity ? mode.values : mode.values.square();
  const double denom = (eps_base * e2).sum();
  if (!(denom > 0.0)) throw DegenerateFieldError("mode has zero stored energy");
  return 0.5 * ((eps_perturbed - eps_base) * e2).sum() / denom;
}

Grid2D baseline_grid(const HoleList& holes, double n_core, double thickness_nm, double design_wavelength_nm,
                     double dx_nm, double padding_nm) {
  const double n_eff = slab_neff(n_core, 1.0, {thickness_nm}, {design_wavelength_nm});
  return rasterize(holes, n_eff, {dx_nm}, {padding_nm});
}

YieldBaseline make_yield_baseline(const HoleList& holes, const CavitySimOptions& options, double alpha) {
  if (options.n_eff) throw ConfigError("yield baseline derives n_eff from the slab; drop the n_eff override");
  CavitySimOptions o = options;
  o.snapshot = true;
  CavitySimResult sim = simulate_cavity(holes, o);
  if (!sim.resonance || !sim.mode) throw PreconditionError("baseline simulation found no resonant mode");
  YieldBaseline b;
  b.holes = holes;
  if (const auto* s1 = std::get_if<Nanobeam1DSpec>(&holes.source)) b.lattice_nm = s1->a_nm;
  if (const auto* s2 = std::get_if<Phc2DSpec>(&holes.source)) b.lattice_nm = s2->a_nm;
  b.n_core = o.n_core;
  b.thickness_nm = o.thickness_nm;
  b.wavelength_nm = sim.wavelength_nm;
  b.design_wavelength_nm = o.design_wavelength_nm;
  b.dx_nm = o.dx_nm;
  b.padding_nm = o.padding_nm;
  b.grid = std::move(sim.grid);
  b.mode = std::move(*sim.mode);
  b.q_base = sim.resonance->q;
  b.alpha = alpha;
  return b;
}

double calibrate_alpha(double q_base, double lattice_nm, const std::vector<std::pair<double, double>>& runs) {
  if (!(q_base > 0.0) || !(lattice_nm > 0.0)) throw DomainError("calibration needs q_base > 0 and a > 0");
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& [sigma, q] : runs) {
    if (!(q > 0.0)) throw DomainError("calibration run with non-positive Q");
    const double x = (sigma / lattice_nm) * (sigma / lattice_nm);
    sxy += x * (1.0 / q - 1.0 / q_base);
    sxx += x * x;
  }
  if (!(sxx > 0.0)) throw DomainError("calibration needs at least one run with sigma > 0");
  return std::max(sxy / sxx, 0.0);
}

Proportion wilson_interval(int successes, int trials, double z) {
  if (trials <= 0 || successes < 0 || successes > trials) throw DomainError("invalid proportion counts");
  Proportion p;
  p.successes = successes;
  p.trials = trials;
  const double n = trials;
  const double f = successes / n;
  p.fraction = f;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (f + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(f * (1.0 - f) / n + z2 / (4.0 * n * n)) / denom;
  // The bounds are exactly 0 / 1 at the extremes; rounding would leave 1 - 1ulp.
  p.lower = successes == 0 ? 0.0 : std::max(0.0, center - half);
  p.upper = successes == trials ? 1.0 : std::min(1.0, center + half);
  return p;
}

YieldReport yield_study(const YieldBaseline& base, const DisorderModel& m, int n_samples,
                        const YieldCriteria& criteria) {
  validate(m);
  if (n_samples <= 0) throw DomainError("n_samples must be positive");
  if (base.mode.values.size() == 0) throw PreconditionError("yield study needs a baseline mode snapshot");
  if (base.mode.values.rows() != base.grid.eps.rows() || base.mode.values.cols() != base.grid.eps.cols()) {
    throw PreconditionError("baseline mode and permittivity grid differ in shape");
  }
  if (!(base.wavelength_nm > 0.0) || !(base.q_base > 0.0) || !(base.lattice_nm > 0.0)) {
    throw PreconditionError("baseline wavelength, Q and lattice constant must be set");
  }

  YieldReport report;
  report.model = m;
  report.criteria = criteria;
  report.n_samples = n_samples;
  report.baseline_wavelength_nm = base.wavelength_nm;
  report.q_base = base.q_base;
  report.alpha = base.alpha;
  report.records.resize(static_cast<std::size_t>(n_samples));
  std::vector<std::string> warnings(static_cast<std::size_t>(n_samples));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(n_samples));

#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (int i = 0; i < n_samples; ++i) {
    try {
      const auto index = static_cast<std::uint64_t>(i);
      const HoleList holes = perturb(base.holes, m, index);
      NormalStream thick(m.seed, index, kThicknessStream);
      const double d = base.thickness_nm + m.sigma_d_nm * thick.next();
      const double n_eff = slab_neff(base.n_core, 1.0, {d}, {base.design_wavelength_nm});
      const Grid2D grid = rasterize(holes, n_eff, {base.dx_nm}, {base.padding_nm}, 4, false);

      YieldRecord& rec = report.records[static_cast<std::size_t>(i)];
      rec.sample = index;
      rec.n_eff = n_eff;
      rec.dlambda_nm = base.wavelength_nm * resonance_shift_perturbation(base.mode, base.grid.eps, grid.eps);

      // Realized jitter of this sample rather than the nominal sigma.
      double sr2 = 0.0;
      double sxy2 = 0.0;
      for (std::size_t k = 0; k < holes.holes.size(); ++k) {
        const Hole& a = base.holes.holes[k];
        const Hole& b = holes.holes[k];
        sr2 += (b.r_nm - a.r_nm) * (b.r_nm - a.r_nm);
        sxy2 += 0.5 * ((b.x_nm - a.x_nm) * (b.x_nm - a.x_nm) + (b.y_nm - a.y_nm) * (b.y_nm - a.y_nm));
      }
      const double nh = std::max<double>(1.0, static_cast<double>(holes.holes.size()));
      rec.sigma_eff_nm = std::sqrt((sr2 + sxy2) / nh);
      const double x = rec.sigma_eff_nm / base.lattice_nm;
      rec.q_est = 1.0 / (1.0 / base.q_base + base.alpha * x * x);
      if (!holes.warnings.empty()) warnings[static_cast<std::size_t>(i)] = holes.warnings.back();
    } catch (...) {
      failures[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  int q_ok = 0;
  int wl_ok = 0;
  int both_ok = 0;
  int truncation_warnings = 0;
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const YieldRecord& r = report.records[i];
    const bool q_pass = r.q_est >= criteria.q_threshold;
    const bool wl_pass = std::abs(r.dlambda_nm) / base.wavelength_nm * 100.0 <= criteria.wavelength_tol_percent;
    q_ok += q_pass;
    wl_ok += wl_pass;
    both_ok += q_pass && wl_pass;
    truncation_warnings += !warnings[i].empty();
  }
  report.q_above = wilson_interval(q_ok, n_samples);
  report.wavelength_within = wilson_interval(wl_ok, n_samples);
  report.both = wilson_interval(both_ok, n_samples);
  if (truncation_warnings > 0) {
    report.notes.push_back(std::to_string(truncation_warnings) + " samples hit the r/2 radius truncation on > 1% of holes");
  }
  report.notes.push_back("Q estimate is phenomenological: 1/Q = 1/Q_base + alpha (sigma_eff/a)^2");
  report.notes.push_back("sidewall roughness, hole tilt and surface absorption are not modeled");
  return report;
}

Json to_json(const YieldReport& r) {
  auto prop = [](const Proportion& p) {
    return Json{{"successes", p.successes}, {"trials", p.trials}, {"fraction", p.fraction},
                {"wilson_lower", p.lower},  {"wilson_upper", p.upper}};
  };
  Json records = Json::array();
  for (const auto& rec : r.records) {
    records.push_back({{"sample", rec.sample},
                       {"dlambda_nm", rec.dlambda_nm},
                       {"q_est", rec.q_est},
                       {"sigma_eff_nm", rec.sigma_eff_nm},
                       {"n_eff", rec.n_eff}});
  }
  return Json{{"schema_version", 1},
              {"model",
               {{"sigma_r_nm", r.model.sigma_r_nm},
                {"sigma_xy_nm", r.model.sigma_xy_nm},
                {"sigma_d_nm", r.model.sigma_d_nm},
                {"seed", r.model.seed}}},
              {"criteria",
               {{"q_threshold", r.criteria.q_threshold},
                {"wavelength_tol_percent", r.criteria.wavelength_tol_percent}}},
              {"n_samples", r.n_samples},
              {"baseline_wavelength_nm", r.baseline_wavelength_nm},
              {"q_base", r.q_base},
              {"alpha", r.alpha},
              {"fraction_q_above", prop(r.q_above)},
              {"fraction_wavelength_within", prop(r.wavelength_within)},
              {"fraction_both", prop(r.both)},
              // Display only; these are measured device statistics, not targets.
              {"reference",
               {{"high_q_yield", 53.0 / 57.0},
                {"high_q_count", "53 of 57"},
                {"wavelength_uniformity_percent", {2.9, 2.5}}}},
              {"records", records},
              {"notes", r.notes}};
}

std::string records_to_csv(const YieldReport& r) {
  std::string out = "sample,dlambda_nm,q_est\n";
  for (const auto& rec : r.records) {
    out += std::to_string(rec.sample) + "," + format_double(rec.dlambda_nm) + "," + format_double(rec.q_est) + "\n";
  }
  return out;
}

}  // namespace phc
