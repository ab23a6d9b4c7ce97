#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cvrsp/commands.hpp"
#include "cvrsp/config.hpp"

using namespace cvrsp;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("cvrsp_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string cli() {
  const char* path = std::getenv("CVRSP_CLI");
  REQUIRE_MESSAGE(path != nullptr, "CVRSP_CLI must point at the command-line binary");
  return path;
}

int run(const std::string& args) {
  const std::string cmd = cli() + " " + args + " >" + (scratch() / "stdout.txt").string() + " 2>" +
                          (scratch() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path write_config(const std::string& name, const json& j) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << j.dump(2);
  return p;
}

// A quick configuration: small grids and a coarse Wigner grid.
RunConfig quick_config() {
  RunConfig c = default_config();
  c.scan.q_grid = {-1.0, 0.0, 1.14};
  c.scan.eta_grid = {0.5, 0.75, 1.0};
  c.scan.delta_grid = {0.0, 0.1, 0.2};
  c.wigner.step = 0.25;
  c.tomo.n_samples = 5000;
  c.tomo.reconstruction.dim_recon = 6;
  return c;
}

std::string args(const std::string& sub, const fs::path& cfg, const fs::path& out) {
  return sub + " --config " + cfg.string() + " --out " + out.string();
}

}  // namespace

TEST_CASE("configuration round trip") {
  const RunConfig d = default_config();
  CHECK(config_from_json(to_json(d)) == d);

  RunConfig c = quick_config();
  c.resource = ResourceParams{IdealResource{0.9}, 0.35};
  c.conditioning.acceptance = Acceptance::Tail;
  c.conditioning.q = 2.0;
  c.conditioning.eta_a = Efficiency(0.8);
  c.targets = {TargetSpec::custom(0.9, std::sqrt(0.5), cplx(0.0, std::sqrt(0.5))),
               TargetSpec::phase_cat(0.9, -1)};
  c.preset = 4;
  c.seed = 987654321987654321ull;
  c.tomo.reconstruction.phase_set = {0.0, 0.5, 1.0};
  const RunConfig back = config_from_json(json::parse(to_json(c).dump()));
  CHECK(back == c);
  CHECK(back.seed == c.seed);
  CHECK(back.targets[0] == c.targets[0]);
}

TEST_CASE("strict parsing") {
  json j = to_json(default_config());
  j["conditioning"]["theta"] = 0.0;
  CHECK_THROWS_AS(config_from_json(j), ConfigError);
  j = to_json(default_config());
  j["dim"] = "thirty";
  CHECK_THROWS_AS(config_from_json(j), ConfigError);
  j = to_json(default_config());
  j["scan"]["q_grid_snu"] = json::array({1.0, 0.0});
  CHECK_THROWS_AS(config_from_json(j), ConfigError);
  j = to_json(default_config());
  j["targets"] = json::array();
  CHECK_THROWS_AS(config_from_json(j), ConfigError);
  j = to_json(default_config());
  j["resource"]["model"] = "thermal";
  CHECK_THROWS_AS(config_from_json(j), ConfigError);
  // missing keys keep defaults
  CHECK(config_from_json(json::object()) == default_config());
}

TEST_CASE("print-config emits the defaults") {
  REQUIRE(run("print-config") == 0);
  CHECK(config_from_json(json::parse(slurp(scratch() / "stdout.txt"))) == default_config());
}

TEST_CASE("exit codes") {
  json empty_targets = to_json(quick_config());
  empty_targets["targets"] = json::array();
  CHECK(run(args("scan", write_config("empty.json", empty_targets), scratch() / "x")) == 2);
  CHECK_FALSE(slurp(scratch() / "stderr.txt").empty());

  json no_samples = to_json(quick_config());
  no_samples["tomo"]["n_samples"] = 0;
  CHECK(run(args("tomo", write_config("nosamples.json", no_samples), scratch() / "x")) == 2);

  CHECK(run("scan --out " + (scratch() / "x").string()) == 2);
  CHECK(run("scan --config " + (scratch() / "missing.json").string() + " --out x") == 2);
  std::ofstream(scratch() / "garbage.json") << "{ not json";
  CHECK(run(args("scan", scratch() / "garbage.json", scratch() / "x")) == 2);

  // Alice only ever holds |1>, and a point projection at q = 0 never fires
  json unreachable = to_json(quick_config());
  unreachable["resource"] = {{"model", "ideal"}, {"alpha", 0.7}, {"weight_dv", 1.0}};
  unreachable["conditioning"]["delta_snu"] = 0.0;
  CHECK(run(args("prepare", write_config("unreachable.json", unreachable), scratch() / "x")) == 3);
}

TEST_CASE("scan outputs") {
  const fs::path cfg = write_config("scan.json", to_json(quick_config()));
  REQUIRE(run(args("scan", cfg, scratch() / "scan1")) == 0);
  REQUIRE(run(args("scan", cfg, scratch() / "scan2")) == 0);
  for (const char* f : {"fig1c.csv", "fig1d.csv", "fig1e.csv"}) {
    const std::string a = slurp(scratch() / "scan1" / f);
    CAPTURE(f);
    CHECK(a.rfind("param,target,fidelity\n", 0) == 0);
    CHECK(a == slurp(scratch() / "scan2" / f));
  }
  const std::string c = slurp(scratch() / "scan1" / "fig1c.csv");
  CHECK(c.find("\n0,cat_minus@0.7,0.94897278109") != std::string::npos);
  // 3 grid points x 6 targets + header
  CHECK(std::count(c.begin(), c.end(), '\n') == 19);
}

TEST_CASE("prepare outputs") {
  SUBCASE("coherent-state preset") {
    RunConfig c = quick_config();
    c.preset = 3;
    REQUIRE(run(args("prepare", write_config("row3.json", to_json(c)), scratch() / "row3")) == 0);
    const json bloch = json::parse(slurp(scratch() / "row3" / "bloch.json"));
    const double az = bloch["azimuth_rad"].get<double>();
    CHECK(std::min(az, 2 * std::numbers::pi - az) <= 0.05);
    CHECK(bloch["polar_rad"].get<double>() > std::numbers::pi / 4);
    CHECK(bloch["polar_rad"].get<double>() < 3 * std::numbers::pi / 4);
    const json state = json::parse(slurp(scratch() / "row3" / "state.json"));
    CHECK(state["published"]["row"] == 3);
    CHECK(state["conditioning"]["q_snu"].get<double>() == doctest::Approx(1.14));
    CHECK_FALSE(state["success_is_density"].get<bool>());
    CHECK(fs::exists(scratch() / "row3" / "wigner.csv"));
    CHECK(fs::exists(scratch() / "row3" / "wigner.json"));
  }
  SUBCASE("Q = 0 favours Cat-") {
    RunConfig c = quick_config();
    c.preset = 2;
    REQUIRE(run(args("prepare", write_config("row2.json", to_json(c)), scratch() / "row2")) == 0);
    const json state = json::parse(slurp(scratch() / "row2" / "state.json"));
    std::string best;
    double best_f = -1;
    for (const auto& f : state["fidelities"]) {
      if (f["fidelity"].get<double>() > best_f) {
        best_f = f["fidelity"].get<double>();
        best = f["target"].get<std::string>();
      }
    }
    CHECK(best == "cat_minus@0.7");
    const double rate = state["heralded_rate_hz"].get<double>();
    CHECK(rate == doctest::Approx(state["success_prob"].get<double>() * 200000.0));
  }
  SUBCASE("point projection is flagged as a density") {
    RunConfig c = quick_config();
    c.conditioning.delta = 0.0;
    REQUIRE(run(args("prepare", write_config("point.json", to_json(c)), scratch() / "point")) == 0);
    const json state = json::parse(slurp(scratch() / "point" / "state.json"));
    CHECK(state["success_is_density"].get<bool>());
    CHECK(state.contains("note"));
  }
}

TEST_CASE("tomo outputs") {
  const fs::path cfg = write_config("tomo.json", to_json(quick_config()));
  REQUIRE(run(args("tomo", cfg, scratch() / "t1")) == 0);
  REQUIRE(run(args("tomo", cfg, scratch() / "t2")) == 0);
  for (const char* f : {"records.csv", "recon.json", "report.json"}) {
    CAPTURE(f);
    CHECK(slurp(scratch() / "t1" / f) == slurp(scratch() / "t2" / f));
  }
  const std::string rec = slurp(scratch() / "t1" / "records.csv");
  CHECK(rec.rfind("theta_rad,q\n", 0) == 0);
  CHECK(std::count(rec.begin(), rec.end(), '\n') == 5001);
  const json report = json::parse(slurp(scratch() / "t1" / "report.json"));
  CHECK(report["n_samples"] == 5000);
  CHECK(report["fidelity"].get<double>() > 0.9);
  CHECK(report["wigner_origin"].get<double>() < 0.0);
  CHECK(report.contains("iterations"));
  const json recon = json::parse(slurp(scratch() / "t1" / "recon.json"));
  CHECK(recon["dim"] == 6);

  REQUIRE(run(args("tomo", cfg, scratch() / "t3") + " --seed 99") == 0);
  CHECK(slurp(scratch() / "t3" / "records.csv") != rec);
  CHECK(json::parse(slurp(scratch() / "t3" / "report.json"))["seed"] == 99);
}

TEST_CASE("default configuration runs") {
  const fs::path cfg = write_config("default.json", to_json(default_config()));
  REQUIRE(run(args("scan", cfg, scratch() / "dscan")) == 0);
  const std::string c = slurp(scratch() / "dscan" / "fig1c.csv");
  CHECK(c.find("\n0,cat_minus@0.7,0.94897278109") != std::string::npos);

  REQUIRE(run(args("tomo", cfg, scratch() / "dtomo")) == 0);
  const json report = json::parse(slurp(scratch() / "dtomo" / "report.json"));
  CHECK(report["n_samples"] == 50000);
  CHECK(report["eta_correction"].get<double>() == 0.85);
  CHECK(report["fidelity"].get<double>() >= 0.98);
  CHECK(report["wigner_origin"].get<double>() <= -0.10);
}

TEST_CASE("cleanup") { fs::remove_all(scratch()); }
