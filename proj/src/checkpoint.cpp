#include "hch/checkpoint.hpp"

#include <fstream>
#include <string>

#include "hch/field_io.hpp"
#include "json.hpp"

namespace hch {

Checkpoint capture(const Integrator& integ, std::uint64_t seed) {
  Checkpoint ck;
  ck.state = integ.state();
  ck.scheme = integ.config();
  ck.nonlinearity = integ.model().nonlinearity();
  ck.source = integ.model().source();
  ck.step = integ.steps();
  ck.seed = seed;
  ck.origin_time = integ.origin_time();
  ck.dissipation = integ.dissipation();
  ck.scheme_dissipation = integ.scheme_dissipation();
  ck.history = integ.history();
  return ck;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ck) {
  const Nonlinearity& nl = ck.nonlinearity;
  nlohmann::json nl_json = {{"a3", nl.a3()}, {"a2", nl.a2()}, {"a1", nl.a1()}};
  if (nl.has_lambda_override()) nl_json["lambda_bound"] = nl.lambda_bound();
  nlohmann::json header = {
      {"format", "ckpt"},
      {"version", kCheckpointVersion},
      {"n_modes", ck.state.grid().n_modes},
      {"side", ck.state.grid().side},
      {"time", ck.state.time},
      {"origin_time", ck.origin_time},
      {"step", ck.step},
      {"seed", ck.seed},
      {"dissipation", ck.dissipation},
      {"scheme_dissipation", ck.scheme_dissipation},
      {"nonlinearity", nl_json},
      {"scheme",
       {{"dt", ck.scheme.dt},
        {"scheme", to_string(ck.scheme.scheme)},
        {"newton_tol", ck.scheme.newton_tol},
        {"newton_max_iter", ck.scheme.newton_max_iter},
        {"safeguard_tol", ck.scheme.safeguard_tol}}},
      {"has_history", ck.history.has_value()},
  };
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << header.dump() << '\n';
  write_mfld(os, ck.state.u, ck.state.time, "u");
  write_mfld(os, ck.state.v, ck.state.time, "ut");
  write_mfld(os, ck.source.g_modal, ck.state.time, "g");
  if (ck.history) write_mfld(os, *ck.history, ck.state.time, "nonlinear_history");
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line)) throw CorruptFile("empty checkpoint");
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFile(std::string("bad checkpoint header: ") + e.what());
  }
  if (!h.is_object() || h.value("format", "") != "ckpt") throw CorruptFile("not a checkpoint file");
  if (h.value("version", -1) != kCheckpointVersion)
    throw CorruptFile("checkpoint version " + h.value("version", nlohmann::json(-1)).dump() + " not supported (expected " +
                      std::to_string(kCheckpointVersion) + ")");
  Checkpoint ck;
  bool has_history = false;
  GridSpec grid;
  try {
    grid = GridSpec(h.at("n_modes").get<std::size_t>(), h.at("side").get<double>());
    const auto& nl = h.at("nonlinearity");
    ck.nonlinearity = Nonlinearity(nl.at("a3").get<double>(), nl.at("a2").get<double>(), nl.at("a1").get<double>());
    if (nl.contains("lambda_bound")) ck.nonlinearity.override_lambda_bound(nl.at("lambda_bound").get<double>());
    const auto& sc = h.at("scheme");
    ck.scheme.dt = sc.at("dt").get<double>();
    ck.scheme.scheme = scheme_from_string(sc.at("scheme").get<std::string>());
    ck.scheme.newton_tol = sc.at("newton_tol").get<double>();
    ck.scheme.newton_max_iter = sc.at("newton_max_iter").get<int>();
    ck.scheme.safeguard_tol = sc.at("safeguard_tol").get<double>();
    ck.step = h.at("step").get<std::uint64_t>();
    ck.seed = h.at("seed").get<std::uint64_t>();
    ck.origin_time = h.at("origin_time").get<double>();
    ck.dissipation = h.at("dissipation").get<double>();
    ck.scheme_dissipation = h.at("scheme_dissipation").get<double>();
    ck.state.time = h.at("time").get<double>();
    has_history = h.at("has_history").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFile(std::string("incomplete checkpoint header: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw CorruptFile(std::string("invalid checkpoint header: ") + e.what());
  }

  auto block = [&](const char* kind) {
    FieldSnapshot s = read_mfld(is);
    if (s.kind != kind) throw CorruptFile(std::string("expected block '") + kind + "', found '" + s.kind + "'");
    if (!(s.field.grid() == grid)) throw CorruptFile("block grid does not match checkpoint header");
    return std::move(s.field);
  };
  ck.state.u = block("u");
  ck.state.v = block("ut");
  ck.source = SourceTerm(block("g"));
  if (has_history) ck.history = block("nonlinear_history");
  return ck;
}

Integrator resume(const Checkpoint& ck) {
  Integrator integ(Model(ck.state.grid(), ck.nonlinearity, ck.source), ck.scheme, ck.state);
  integ.restore(ck.state, ck.origin_time, ck.step, ck.history, ck.dissipation, ck.scheme_dissipation);
  return integ;
}

Integrator resume(const Checkpoint& ck, const GridSpec& expected_grid, const Nonlinearity& expected_nl) {
  if (!(ck.state.grid() == expected_grid))
    throw std::invalid_argument("checkpoint grid (n_modes=" + std::to_string(ck.state.grid().n_modes) +
                                ") does not match the requested grid (n_modes=" +
                                std::to_string(expected_grid.n_modes) + ")");
  if (!(ck.nonlinearity == expected_nl))
    throw std::invalid_argument("checkpoint nonlinearity does not match the requested one");
  return resume(ck);
}

}  // namespace hch
