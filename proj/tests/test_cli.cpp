#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hch/commands.hpp"
#include "json.hpp"

using namespace hch;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / "hch_test_cli" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

fs::path write_config(const fs::path& dir, const json& j) {
  const fs::path p = dir / "input.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

json read_json(const fs::path& p) {
  std::ifstream is(p);
  return json::parse(is);
}

std::string read_all(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const std::string& cmd, const fs::path& dir, const json& cfg, CommandOptions opt = {}) {
  json j = cfg;
  if (!j.contains("output_dir")) j["output_dir"] = (dir / "out").string();
  opt.config_path = write_config(dir, j).string();
  std::ostringstream out, err;
  const int code = run_command(cmd, opt, out, err);
  return {code, out.str(), err.str()};
}

json small_run() {
  return {{"grid", {{"n_modes", 8}}}, {"t_end", 0.05}, {"sample_every", 5}, {"scheme", {{"dt", 1e-3}}}};
}

}  // namespace

TEST_CASE("simulate with t_end = 0 reports the initial state") {
  const fs::path d = fresh_dir("t0");
  json cfg = small_run();
  cfg["t_end"] = 0.0;
  const Outcome o = run("simulate", d, cfg);
  CHECK(o.code == kExitPass);
  const json s = read_json(d / "out" / "summary.json");
  CHECK(s["schema"] == 1);
  CHECK(s["steps"] == 0);
  CHECK(s["t_final"] == 0.0);
  CHECK(s["final"]["energy"] == s["energy_initial"]);
  CHECK(s["dissipation"] == 0.0);
  for (const char* f : {"trajectory.csv", "u_final.mfld", "ut_final.mfld", "final.ckpt", "config.json"})
    CHECK(fs::exists(d / "out" / f));
}

TEST_CASE("linear single-mode simulate matches the closed form") {
  const fs::path d = fresh_dir("linear");
  const json cfg = {{"grid", {{"n_modes", 4}}},
                    {"nonlinearity", {{"a3", 0.0}, {"a2", 0.0}, {"a1", 0.0}}},
                    {"initial", {{"u", {{"preset", "single_mode"}, {"j", 1}, {"k", 1}, {"amp", 1.0}}}}},
                    {"scheme", {{"dt", 1e-3}}},
                    {"t_end", 1.0}};
  REQUIRE(run("simulate", d, cfg).code == kExitPass);
  // u'' + u' + 4u = 0, u(0) = 1, u'(0) = 0
  const double w = std::sqrt(15.0) / 2.0, e = std::exp(-0.5);
  const double u = e * (std::cos(w) + std::sin(w) / (2 * w));
  const double ut = -e * (4.0 / w) * std::sin(w);
  const double energy = 0.5 * (2.0 * u * u + ut * ut / 2.0);
  const json s = read_json(d / "out" / "summary.json");
  CHECK(s["energy_initial"].get<double>() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(s["final"]["energy"].get<double>() - energy) <= 1e-5);
}

TEST_CASE("configuration errors exit 2") {
  const fs::path d = fresh_dir("errors");
  CommandOptions opt;
  opt.config_path = (d / "missing.json").string();
  std::ostringstream out, err;
  CHECK(run_command("simulate", opt, out, err) == kExitUsage);
  CHECK(err.str().find("missing.json") != std::string::npos);

  json bad = small_run();
  bad["grid"]["n_mode"] = 8;
  const Outcome o = run("simulate", d, bad);
  CHECK(o.code == kExitUsage);
  CHECK(o.err.find("grid.n_mode") != std::string::npos);

  json typed = small_run();
  typed["t_end"] = "soon";
  CHECK(run("simulate", d, typed).code == kExitUsage);

  std::ofstream(d / "garbage.json") << "{ not json";
  opt.config_path = (d / "garbage.json").string();
  CHECK(run_command("check", opt, out, err) == kExitUsage);
  CHECK(run_command("frobnicate", CommandOptions{}, out, err) == kExitUsage);

  json conv = small_run();
  conv["converge"] = {{"resolutions", {8, 16}}, {"n_ref", 24}};
  CHECK(run("converge", d, conv).code == kExitUsage);

  CommandOptions only;
  only.only = {"parseval"};
  CHECK(run("simulate", d, small_run(), only).code == kExitUsage);
}

TEST_CASE("runtime failure exits 1 with the failing time") {
  const fs::path d = fresh_dir("unstable");
  json cfg = small_run();
  cfg["grid"]["n_modes"] = 16;
  cfg["scheme"]["dt"] = 0.5;
  cfg["t_end"] = 100.0;
  cfg["initial"] = {{"u", {{"preset", "random_band"}, {"band", 16}, {"amplitude", 20.0}}}};
  const Outcome o = run("simulate", d, cfg);
  CHECK(o.code == kExitFail);
  const json s = read_json(d / "out" / "summary.json");
  CHECK(s["status"] == "fail");
  CHECK(s.contains("failed_at"));
}

TEST_CASE("check suite") {
  const fs::path d = fresh_dir("check");
  const Outcome ok = run("check", d, json::object());
  CHECK(ok.code == kExitPass);
  const json rep = read_json(d / "out" / "check.json");
  CHECK(rep["status"] == "pass");
  CHECK(ok.out.find("parseval") != std::string::npos);

  json broken = {{"nonlinearity", {{"a3", 1.0}, {"a2", 0.0}, {"a1", -1.0}, {"lambda_bound", 0.0}}}};
  const Outcome bad = run("check", d, broken);
  CHECK(bad.code == kExitFail);
  bool assumptions_failed = false;
  const json failed = read_json(d / "out" / "check.json");
  for (const auto& row : failed["checks"])
    if (row["name"] == "assumptions" && row["passed"] == false) assumptions_failed = true;
  CHECK(assumptions_failed);

  CommandOptions opt;
  opt.only = {"parseval"};
  REQUIRE(run("check", d, json::object(), opt).code == kExitPass);
  const json single = read_json(d / "out" / "check.json");
  CHECK_FALSE(single["checks"].empty());
  for (const auto& row : single["checks"]) CHECK(row["name"] == "parseval");
  opt.only = {"nonsense"};
  CHECK(run("check", d, json::object(), opt).code == kExitUsage);
}

TEST_CASE("equilibrium with zero forcing") {
  const fs::path d = fresh_dir("equilibrium");
  json cfg = small_run();
  cfg["initial"] = {{"u", {{"preset", "zero"}}}};
  CHECK(run("equilibrium", d, cfg).code == kExitPass);
  const json rep = read_json(d / "out" / "equilibrium.json");
  CHECK(rep["residual"] == 0.0);
  CHECK(fs::exists(d / "out" / "u_star.mfld"));
}

TEST_CASE("decompose keeps the sum identity") {
  const fs::path d = fresh_dir("decompose");
  json cfg = small_run();
  cfg["grid"]["n_modes"] = 16;
  cfg["decompose"] = {{"t_end", 4.0}};
  CHECK(run("decompose", d, cfg).code == kExitPass);
  const json rep = read_json(d / "out" / "decompose.json");
  CHECK(rep["sum_error_relative"].get<double>() <= 1e-9);
}

TEST_CASE("determinism, config echo and overrides") {
  const fs::path d = fresh_dir("determinism");
  const json cfg = small_run();
  REQUIRE(run("simulate", d, cfg).code == kExitPass);
  const std::string csv = read_all(d / "out" / "trajectory.csv");
  const std::string summary = read_all(d / "out" / "summary.json");
  const std::string echoed = read_all(d / "out" / "config.json");
  REQUIRE(run("simulate", d, cfg).code == kExitPass);
  CHECK(read_all(d / "out" / "trajectory.csv") == csv);
  CHECK(read_all(d / "out" / "summary.json") == summary);

  // replay from the echoed config into another directory
  CommandOptions replay;
  replay.config_path = (d / "out" / "config.json").string();
  replay.output_dir = (d / "replay").string();
  std::ostringstream out, err;
  REQUIRE(run_command("simulate", replay, out, err) == kExitPass);
  CHECK(read_all(d / "replay" / "trajectory.csv") == csv);
  CHECK(read_all(d / "replay" / "summary.json") == summary);
  json a = json::parse(echoed), b = read_json(d / "replay" / "config.json");
  a.erase("output_dir");
  b.erase("output_dir");
  CHECK(a == b);

  CommandOptions seeded;
  seeded.seed = 99;
  seeded.output_dir = (d / "seeded").string();
  REQUIRE(run("simulate", d, cfg, seeded).code == kExitPass);
  CHECK(read_json(d / "seeded" / "config.json")["seed"] == 99);
  CHECK(read_all(d / "seeded" / "trajectory.csv") != csv);

  CommandOptions quiet;
  quiet.quiet = true;
  const Outcome q = run("simulate", d, cfg, quiet);
  CHECK(q.code == kExitPass);
  CHECK(q.out.empty());
}

TEST_CASE("resume continues a run bitwise") {
  const fs::path d = fresh_dir("resume");
  json full = small_run();
  full["t_end"] = 0.02;
  full["sample_every"] = 1;
  full["output_dir"] = (d / "full").string();
  REQUIRE(run("simulate", d, full).code == kExitPass);

  json first = full;
  first["t_end"] = 0.01;
  first["output_dir"] = (d / "first").string();
  REQUIRE(run("simulate", d, first).code == kExitPass);

  json second = full;
  second["resume_from"] = (d / "first" / "final.ckpt").string();
  second["output_dir"] = (d / "second").string();
  REQUIRE(run("simulate", d, second).code == kExitPass);
  CHECK(read_all(d / "second" / "u_final.mfld") == read_all(d / "full" / "u_final.mfld"));
  CHECK(read_all(d / "second" / "ut_final.mfld") == read_all(d / "full" / "ut_final.mfld"));
  const json a = read_json(d / "full" / "summary.json"), b = read_json(d / "second" / "summary.json");
  CHECK(a["final"] == b["final"]);
}

TEST_CASE("field presets from files resolve against the config directory") {
  const fs::path d = fresh_dir("files");
  json cfg = small_run();
  cfg["t_end"] = 0.0;
  REQUIRE(run("simulate", d, cfg).code == kExitPass);
  fs::copy_file(d / "out" / "u_final.mfld", d / "u0.mfld");
  json from_file = cfg;
  from_file["initial"] = {{"u", {{"preset", "file"}, {"path", "u0.mfld"}}}};
  from_file["output_dir"] = (d / "again").string();
  REQUIRE(run("simulate", d, from_file).code == kExitPass);
  CHECK(read_all(d / "again" / "u_final.mfld") == read_all(d / "out" / "u_final.mfld"));

  from_file["initial"]["u"]["path"] = "absent.mfld";
  CHECK(run("simulate", d, from_file).code == kExitUsage);
}

TEST_CASE("every command honours the output directory") {
  const fs::path d = fresh_dir("all");
  json cfg = small_run();
  cfg["converge"] = {{"resolutions", {4, 8}}, {"n_ref", 16}, {"t_star", 0.01}};
  cfg["initial"] = {{"u", {{"preset", "random_band"}, {"band", 4}, {"amplitude", 1.0}}}};
  cfg["decompose"] = {{"t_end", 2.0}, {"fit_t0", 0.5}};
  cfg["lojasiewicz"] = {{"t_end", 60.0}};
  cfg["absorb"] = {{"radii", {1.0, 2.0}}, {"n_per_radius", 1}, {"t_end", 30.0}};
  cfg["lipschitz"] = {{"t_end", 1.0}};
  cfg["scheme"]["dt"] = 1e-2;
  for (const std::string& name : command_names()) {
    CAPTURE(name);
    const Outcome o = run(name, d, cfg);
    CHECK(o.code != kExitUsage);
    const std::string report = name == "simulate" ? "summary.json" : name + ".json";
    REQUIRE(fs::exists(d / "out" / report));
    CHECK(read_json(d / "out" / report)["schema"] == 1);
  }
}
