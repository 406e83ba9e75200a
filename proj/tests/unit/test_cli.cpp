#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "phc/cli.hpp"
#include "phc/error.hpp"
#include "phc/spectrum_io.hpp"

using namespace phc;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = PHC_SOURCE_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run lab(std::vector<std::string> args) {
  args.insert(args.begin(), "phc_lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("phc_cli_" + std::to_string(getpid())) / name;
  fs::remove_all(p);
  return p;
}

std::string config(const std::string& name) { return (kSource / "configs" / name).string(); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing is strict") {
  const fs::path base = kSource / "configs";
  CHECK_THROWS_AS(cli::parse_design_config(Json{{"schema_version", 1}, {"geometry", {{"type", "nanobeam1d"}}}, {"colour", 1}}, base),
                  ConfigError);
  CHECK_THROWS_AS(cli::parse_design_config(Json{{"schema_version", 2}, {"geometry", {{"type", "nanobeam1d"}}}}, base),
                  ConfigError);
  CHECK_THROWS_AS(cli::parse_design_config(Json{{"schema_version", 1}}, base), ConfigError);
  const auto fit = cli::parse_fit_config(cli::load_config_json(base / "fit_dip.json"), base);
  REQUIRE(fit.data.size() == 1);
  CHECK(fs::equivalent(fit.data[0], kSource / "data" / "dip_synthetic.csv"));
  CHECK_THROWS_AS(cli::load_config_json(base / "design_malformed.json"), ConfigError);
  CHECK_THROWS(cli::load_config_json(base / "no_such_file.json"));
  const auto sim = cli::parse_simulate_config(cli::load_config_json(base / "simulate_sweep.json"), base);
  CHECK(sim.sweep_a_nm.size() == 5);
  CHECK_FALSE(cli::simulate_fields_help().empty());
}

TEST_CASE("design writes a layout and refuses to overwrite") {
  const fs::path out = scratch("design");
  CHECK(lab({"design", "--config", config("design_1d.json"), "--out", out.string()}).code == 0);
  CHECK(fs::exists(out / "layout.json"));
  CHECK(fs::exists(out / "layout.csv"));
  CHECK(fs::exists(out / "drc.json"));
  CHECK(lab({"design", "--config", config("design_1d.json"), "--out", out.string()}).code == 1);
  CHECK(lab({"--force", "design", "--config", config("design_1d.json"), "--out", out.string()}).code == 0);
  CHECK(lab({"design", "--config", config("design_overlap.json"), "--out", scratch("overlap").string()}).code == 2);
  CHECK(lab({"design", "--config", config("design_malformed.json"), "--out", scratch("bad").string()}).code == 1);
}

TEST_CASE("fit exit codes") {
  const fs::path out = scratch("fit");
  CHECK(lab({"fit", "--config", config("fit_dip.json"), "--out", out.string()}).code == 0);
  const Json j = Json::parse(read_text_file((out / "fit.json").string()));
  CHECK(j["derived"]["q_loaded"].get<double>() == doctest::Approx(8.4e4).epsilon(1e-3));
  CHECK(lab({"fit", "--config", config("fit_flat.json"), "--out", scratch("flat").string()}).code == 4);
  CHECK(lab({"fit", "--config", config("fit_empty.json"), "--out", scratch("empty").string()}).code == 1);
}

TEST_CASE("report and cqed") {
  const fs::path out = scratch("report");
  CHECK(lab({"report", "--config", config("report.json"), "--out", out.string()}).code == 0);
  std::ifstream golden(kSource / "tests" / "golden" / "rankings_report.csv");
  std::stringstream g;
  g << golden.rdbuf();
  CHECK(read_text_file((out / "rankings.csv").string()) == g.str());
  const fs::path cqed = scratch("cqed");
  CHECK(lab({"cqed", "--config", config("cqed.json"), "--out", cqed.string()}).code == 0);
  CHECK(fs::exists(cqed / "cqed.json"));
}

TEST_CASE("usage errors") {
  CHECK(lab({}).code == 1);
  CHECK(lab({"frobnicate"}).code == 1);
  CHECK(lab({"design", "--out", scratch("noconfig").string()}).code == 1);
  CHECK(lab({"design", "--help"}).code == 0);
  const Run table = lab({"table"});
  CHECK(table.code == 0);
  CHECK(table.out.rfind("cavity_type,", 0) == 0);
}

}  // TEST_SUITE
