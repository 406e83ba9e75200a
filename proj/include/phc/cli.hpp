#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "phc/cavity.hpp"
#include "phc/cqed.hpp"
#include "phc/disorder.hpp"
#include "phc/geometry.hpp"
#include "phc/json_util.hpp"
#include "phc/literature.hpp"

namespace phc::cli {

/// Process exit codes; a stable contract for scripts.
enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 1,       ///< config, I/O or domain error
  kExitDrc = 2,         ///< design rule violations
  kExitDivergence = 3,  ///< FDTD blow-up
  kExitUnconverged = 4, ///< fit did not converge
};

inline constexpr int kConfigSchemaVersion = 1;

struct GlobalOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool force = false;
};

/// Fields shared by every config file. Relative paths inside a config resolve
/// against the directory holding it.
struct CommonConfig {
  std::filesystem::path base_dir;
  std::optional<std::string> out;
  std::uint64_t seed = 0;
};

struct DesignConfig {
  CommonConfig common;
  GeometrySpec geometry;
  double min_gap_nm = 20.0;
  double min_clearance_nm = 20.0;
};

/// Where a command gets its holes: a layout written by `design`, or an inline spec.
struct LayoutSource {
  std::optional<std::filesystem::path> layout;
  GeometrySpec geometry;
};

struct SimulateConfig {
  CommonConfig common;
  enum class Mode { Cavity, Vacuum } mode = Mode::Cavity;
  LayoutSource source;
  std::vector<double> sweep_a_nm;  ///< inline geometry only; empty means a single run
  CavitySimOptions options;
  double cells_per_wavelength = 20.0;  ///< vacuum mode
  double wavelength_nm = 737.0;        ///< vacuum mode
};

struct BandsConfig {
  CommonConfig common;
  double a_nm = 252.0;
  double r_nm = 65.0;
  std::optional<double> n_eff;
  double n_core = kDiamondIndex;
  double thickness_nm = 160.0;
  double wavelength_nm = 737.0;
  std::optional<double> design_wavelength_nm;  ///< a / lambda checked against the gaps
  int n_pw = 11;
  int n_bands = 8;
  int points_per_segment = 30;
};

struct FitConfig {
  CommonConfig common;
  enum class Model { Lorentzian, Dip, Lifetime, G2, Ple, Hysteresis } model = Model::Dip;
  std::vector<std::filesystem::path> data;  ///< one file, or the scans for ple/hysteresis
  std::optional<double> t_start_ns;
  double q_threshold = 0.2;  ///< hysteresis only
};

struct CqedConfig {
  CommonConfig common;
  CqedInputs inputs;
};

struct YieldConfig {
  CommonConfig common;
  LayoutSource source;
  CavitySimOptions options;
  DisorderModel model;
  int n_samples = 500;
  YieldCriteria criteria;
  double alpha = 0.0;
  std::optional<double> q_base;  ///< replaces the simulated baseline Q
};

struct ReportConfig {
  CommonConfig common;
  std::vector<ResultEntry> entries;
  std::vector<std::filesystem::path> fits;  ///< FitResult JSON files; q_loaded or q becomes an entry
  std::optional<CqedInputs> cqed;
  bool plot_csv = true;
};

Json load_config_json(const std::filesystem::path& path);

DesignConfig parse_design_config(const Json& j, const std::filesystem::path& base_dir);
SimulateConfig parse_simulate_config(const Json& j, const std::filesystem::path& base_dir);
BandsConfig parse_bands_config(const Json& j, const std::filesystem::path& base_dir);
FitConfig parse_fit_config(const Json& j, const std::filesystem::path& base_dir);
CqedConfig parse_cqed_config(const Json& j, const std::filesystem::path& base_dir);
YieldConfig parse_yield_config(const Json& j, const std::filesystem::path& base_dir);
ReportConfig parse_report_config(const Json& j, const std::filesystem::path& base_dir);

/// Field listings with units, shown as the `--help` footer of each command.
std::string design_fields_help();
std::string simulate_fields_help();
std::string bands_fields_help();
std::string fit_fields_help();
std::string cqed_fields_help();
std::string yield_fields_help();
std::string report_fields_help();

/// Parses the command line, runs one command and returns its exit code.
/// Progress goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace phc::cli
