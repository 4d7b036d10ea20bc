#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hch/checkpoint.hpp"
#include "hch/field_io.hpp"
#include "hch/spectral.hpp"

using namespace hch;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "hch_test_checkpoint";
  fs::create_directories(dir);
  return dir / name;
}

Integrator make_integrator(std::uint64_t seed) {
  const GridSpec g(16, std::numbers::pi);
  SchemeConfig c;
  c.dt = 1e-3;
  const State s0(random_band_limited(g, 5, 1.5, seed), random_band_limited(g, 5, 0.5, seed + 1));
  return Integrator(Model(g, Nonlinearity(1, 0.2, -1), SourceTerm(random_band_limited(g, 3, 0.3, seed + 2))), c, s0);
}

std::string read_all(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("save then load is the identity") {
  Integrator integ = make_integrator(1);
  for (int i = 0; i < 7; ++i) integ.step();
  const Checkpoint ck = capture(integ, 42);
  const fs::path p = scratch("roundtrip.ckpt");
  save_checkpoint(p, ck);
  const Checkpoint back = load_checkpoint(p);
  CHECK(back.state == ck.state);
  CHECK(back.scheme == ck.scheme);
  CHECK(back.nonlinearity == ck.nonlinearity);
  CHECK(back.source.g_modal == ck.source.g_modal);
  CHECK(back.step == 7);
  CHECK(back.seed == 42);
  CHECK(back.origin_time == ck.origin_time);
  CHECK(back.dissipation == ck.dissipation);
  CHECK(back.scheme_dissipation == ck.scheme_dissipation);
  REQUIRE(back.history.has_value());
  CHECK(*back.history == *ck.history);
}

TEST_CASE("a fresh integrator has no history") {
  const Integrator integ = make_integrator(2);
  const fs::path p = scratch("fresh.ckpt");
  save_checkpoint(p, capture(integ, 0));
  CHECK_FALSE(load_checkpoint(p).history.has_value());
}

TEST_CASE("resume then run equals the uninterrupted run bitwise") {
  Integrator straight = make_integrator(3);
  Integrator first = make_integrator(3);
  for (int i = 0; i < 5; ++i) {
    straight.step();
    first.step();
  }
  const fs::path p = scratch("resume.ckpt");
  save_checkpoint(p, capture(first, 0));
  Integrator resumed = resume(load_checkpoint(p));
  for (int i = 0; i < 10; ++i) {
    straight.step();
    resumed.step();
  }
  CHECK(resumed.state() == straight.state());
  CHECK(resumed.energy() == straight.energy());
  CHECK(resumed.dissipation() == straight.dissipation());
  CHECK(resumed.scheme_dissipation() == straight.scheme_dissipation());
  CHECK(resumed.steps() == straight.steps());
}

TEST_CASE("corrupt and mismatched checkpoints") {
  Integrator integ = make_integrator(4);
  integ.step();
  const fs::path p = scratch("good.ckpt");
  save_checkpoint(p, capture(integ, 0));
  const std::string bytes = read_all(p);

  const fs::path t = scratch("truncated.ckpt");
  std::ofstream(t, std::ios::binary) << bytes.substr(0, bytes.size() - 100);
  CHECK_THROWS_AS(load_checkpoint(t), CorruptFile);

  const fs::path e = scratch("empty.ckpt");
  std::ofstream(e, std::ios::binary).flush();
  CHECK_THROWS_AS(load_checkpoint(e), CorruptFile);

  std::string other = bytes;
  const auto at = other.find("\"version\":1");
  REQUIRE(at != std::string::npos);
  other.replace(at, 11, "\"version\":9");
  const fs::path v = scratch("version.ckpt");
  std::ofstream(v, std::ios::binary) << other;
  CHECK_THROWS_AS(load_checkpoint(v), CorruptFile);

  const Checkpoint ck = load_checkpoint(p);
  CHECK_THROWS_AS(resume(ck, GridSpec(32, std::numbers::pi), ck.nonlinearity), std::invalid_argument);
  CHECK_THROWS_AS(resume(ck, ck.state.grid(), Nonlinearity(1, 0, -1)), std::invalid_argument);
  CHECK_NOTHROW(resume(ck, ck.state.grid(), ck.nonlinearity));
}
