#include "hch/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>

#include "hch/analysis.hpp"
#include "hch/field_io.hpp"
#include "hch/spectral.hpp"

namespace hch {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
}

void allow_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  require_object(j, path);
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; }))
      throw ConfigError(join(path, k), "unknown key");
  }
}

template <class T>
T read_as(const json& v, const std::string& key) {
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(key, "expected a boolean");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(key, "expected a string");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(key, "expected a number");
    } else if constexpr (std::is_unsigned_v<T>) {
      if (!v.is_number_unsigned()) throw ConfigError(key, "expected a non-negative integer");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
    }
    return v.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(key, e.what());
  }
}

template <class T>
void read(const json& obj, const std::string& path, const char* key, T& out) {
  if (obj.contains(key)) out = read_as<T>(obj.at(key), join(path, key));
}

template <class T>
void read(const json& obj, const std::string& path, const char* key, std::optional<T>& out) {
  if (obj.contains(key) && !obj.at(key).is_null()) out = read_as<T>(obj.at(key), join(path, key));
}

template <class T>
void read_list(const json& obj, const std::string& path, const char* key, std::vector<T>& out) {
  if (!obj.contains(key)) return;
  const std::string k = join(path, key);
  const json& a = obj.at(key);
  if (!a.is_array() || a.empty()) throw ConfigError(k, "expected a non-empty array");
  out.clear();
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(read_as<T>(a[i], k + "[" + std::to_string(i) + "]"));
}

void positive(double x, const std::string& key) {
  if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(key, "must be > 0");
}

FieldPreset parse_preset(const json& j, const std::string& path, const std::filesystem::path& base) {
  require_object(j, path);
  FieldPreset p;
  read(j, path, "preset", p.preset);
  if (p.preset == "zero") {
    allow_keys(j, path, {"preset"});
  } else if (p.preset == "single_mode") {
    allow_keys(j, path, {"preset", "j", "k", "amp"});
    read(j, path, "j", p.j);
    read(j, path, "k", p.k);
    read(j, path, "amp", p.amp);
  } else if (p.preset == "random_band") {
    allow_keys(j, path, {"preset", "band", "amplitude", "seed"});
    read(j, path, "band", p.band);
    read(j, path, "amplitude", p.amplitude);
    read(j, path, "seed", p.seed);
    if (p.band < 1) throw ConfigError(join(path, "band"), "must be >= 1");
  } else if (p.preset == "file") {
    allow_keys(j, path, {"preset", "path"});
    if (!j.contains("path")) throw ConfigError(join(path, "path"), "required for preset 'file'");
    read(j, path, "path", p.path);
    std::filesystem::path fp(p.path);
    if (fp.is_relative() && !base.empty()) fp = base / fp;
    if (!std::filesystem::exists(fp)) throw ConfigError(join(path, "path"), "file not found: " + fp.string());
    p.path = std::filesystem::absolute(fp).lexically_normal().string();
  } else {
    throw ConfigError(join(path, "preset"), "unknown preset '" + p.preset + "'");
  }
  return p;
}

json preset_json(const FieldPreset& p) {
  if (p.preset == "single_mode") return {{"preset", p.preset}, {"j", p.j}, {"k", p.k}, {"amp", p.amp}};
  if (p.preset == "random_band") {
    json j = {{"preset", p.preset}, {"band", p.band}, {"amplitude", p.amplitude}};
    if (p.seed) j["seed"] = *p.seed;
    return j;
  }
  if (p.preset == "file") return {{"preset", p.preset}, {"path", p.path}};
  return {{"preset", "zero"}};
}

}  // namespace

RunConfig parse_config(const json& j, const std::filesystem::path& base) {
  allow_keys(j, "",
             {"seed", "grid", "nonlinearity", "source", "initial", "scheme", "t_end", "sample_every", "snapshot_every",
              "output_dir", "resume_from", "converge", "decompose", "equilibrium", "lojasiewicz", "absorb",
              "lipschitz", "check"});
  RunConfig c;
  read(j, "", "seed", c.seed);

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    allow_keys(g, "grid", {"n_modes", "side"});
    std::size_t n = c.grid.n_modes;
    double side = c.grid.side;
    read(g, "grid", "n_modes", n);
    read(g, "grid", "side", side);
    if (n < 2) throw ConfigError("grid.n_modes", "must be >= 2");
    positive(side, "grid.side");
    c.grid = GridSpec(n, side);
  }

  if (j.contains("nonlinearity")) {
    const json& nl = j.at("nonlinearity");
    allow_keys(nl, "nonlinearity", {"a3", "a2", "a1", "lambda_bound"});
    double a3 = c.nl.a3(), a2 = c.nl.a2(), a1 = c.nl.a1();
    std::optional<double> lam;
    read(nl, "nonlinearity", "a3", a3);
    read(nl, "nonlinearity", "a2", a2);
    read(nl, "nonlinearity", "a1", a1);
    read(nl, "nonlinearity", "lambda_bound", lam);
    try {
      c.nl = Nonlinearity(a3, a2, a1);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("nonlinearity.a3", e.what());
    }
    if (lam) {
      if (!(*lam >= 0.0)) throw ConfigError("nonlinearity.lambda_bound", "must be >= 0");
      c.nl.override_lambda_bound(*lam);
    }
  }

  if (j.contains("source")) {
    c.source = parse_preset(j.at("source"), "source", base);
    if (c.source.preset == "random_band") throw ConfigError("source.preset", "random_band is not a source preset");
  }
  if (j.contains("initial")) {
    const json& in = j.at("initial");
    allow_keys(in, "initial", {"u", "ut"});
    if (in.contains("u")) c.initial_u = parse_preset(in.at("u"), "initial.u", base);
    if (in.contains("ut")) c.initial_ut = parse_preset(in.at("ut"), "initial.ut", base);
  }

  if (j.contains("scheme")) {
    const json& s = j.at("scheme");
    allow_keys(s, "scheme", {"dt", "scheme", "newton_tol", "newton_max_iter", "safeguard_tol"});
    read(s, "scheme", "dt", c.scheme.dt);
    if (s.contains("scheme")) {
      try {
        c.scheme.scheme = scheme_from_string(read_as<std::string>(s.at("scheme"), "scheme.scheme"));
      } catch (const std::invalid_argument& e) {
        throw ConfigError("scheme.scheme", e.what());
      }
    }
    read(s, "scheme", "newton_tol", c.scheme.newton_tol);
    read(s, "scheme", "newton_max_iter", c.scheme.newton_max_iter);
    read(s, "scheme", "safeguard_tol", c.scheme.safeguard_tol);
    if (!(c.scheme.dt != 0.0) || !std::isfinite(c.scheme.dt)) throw ConfigError("scheme.dt", "must be nonzero");
    if (c.scheme.dt < 0.0 && c.scheme.scheme != Scheme::ImplicitNewton)
      throw ConfigError("scheme.dt", "negative dt requires scheme implicit_newton");
    positive(c.scheme.newton_tol, "scheme.newton_tol");
    positive(c.scheme.safeguard_tol, "scheme.safeguard_tol");
    if (c.scheme.newton_max_iter < 1) throw ConfigError("scheme.newton_max_iter", "must be >= 1");
  }

  read(j, "", "t_end", c.t_end);
  if (!std::isfinite(c.t_end)) throw ConfigError("t_end", "must be finite");
  read(j, "", "sample_every", c.sample_every);
  if (c.sample_every < 1) throw ConfigError("sample_every", "must be >= 1");
  read(j, "", "snapshot_every", c.snapshot_every);
  read(j, "", "output_dir", c.output_dir);
  read(j, "", "resume_from", c.resume_from);
  if (!c.resume_from.empty()) {
    std::filesystem::path fp(c.resume_from);
    if (fp.is_relative() && !base.empty()) fp = base / fp;
    if (!std::filesystem::exists(fp)) throw ConfigError("resume_from", "file not found: " + fp.string());
    c.resume_from = std::filesystem::absolute(fp).lexically_normal().string();
  }

  if (j.contains("converge")) {
    const json& b = j.at("converge");
    allow_keys(b, "converge", {"resolutions", "n_ref", "t_star", "samples", "max_gap_ratio"});
    read_list(b, "converge", "resolutions", c.converge.resolutions);
    read(b, "converge", "n_ref", c.converge.n_ref);
    read(b, "converge", "t_star", c.converge.t_star);
    read(b, "converge", "samples", c.converge.samples);
    read(b, "converge", "max_gap_ratio", c.converge.max_gap_ratio);
    positive(c.converge.t_star, "converge.t_star");
  }
  if (j.contains("decompose")) {
    const json& b = j.at("decompose");
    allow_keys(b, "decompose", {"big_l", "t_end", "fit_t0", "fit_t1", "max_doublings", "min_r2", "sum_tol"});
    read(b, "decompose", "big_l", c.decompose.big_l);
    read(b, "decompose", "t_end", c.decompose.t_end);
    read(b, "decompose", "fit_t0", c.decompose.fit_t0);
    read(b, "decompose", "fit_t1", c.decompose.fit_t1);
    read(b, "decompose", "max_doublings", c.decompose.max_doublings);
    read(b, "decompose", "min_r2", c.decompose.min_r2);
    read(b, "decompose", "sum_tol", c.decompose.sum_tol);
    if (c.decompose.big_l) positive(*c.decompose.big_l, "decompose.big_l");
    positive(c.decompose.t_end, "decompose.t_end");
  }
  if (j.contains("equilibrium")) {
    const json& b = j.at("equilibrium");
    allow_keys(b, "equilibrium", {"tol", "max_iter", "seed_field"});
    read(b, "equilibrium", "tol", c.equilibrium.tol);
    read(b, "equilibrium", "max_iter", c.equilibrium.max_iter);
    if (b.contains("seed_field") && !b.at("seed_field").is_null())
      c.equilibrium.seed_field = parse_preset(b.at("seed_field"), "equilibrium.seed_field", base);
    positive(c.equilibrium.tol, "equilibrium.tol");
  }
  if (j.contains("lojasiewicz")) {
    const json& b = j.at("lojasiewicz");
    allow_keys(b, "lojasiewicz", {"t_end", "tol", "eq_tol", "eq_max_iter", "distance_tol"});
    read(b, "lojasiewicz", "t_end", c.lojasiewicz.t_end);
    read(b, "lojasiewicz", "tol", c.lojasiewicz.tol);
    read(b, "lojasiewicz", "eq_tol", c.lojasiewicz.eq_tol);
    read(b, "lojasiewicz", "eq_max_iter", c.lojasiewicz.eq_max_iter);
    read(b, "lojasiewicz", "distance_tol", c.lojasiewicz.distance_tol);
    positive(c.lojasiewicz.tol, "lojasiewicz.tol");
    positive(c.lojasiewicz.eq_tol, "lojasiewicz.eq_tol");
  }
  if (j.contains("absorb")) {
    const json& b = j.at("absorb");
    allow_keys(b, "absorb", {"radii", "n_per_radius", "band", "t_end", "floor", "rel_tol", "min_tail"});
    read_list(b, "absorb", "radii", c.absorb.radii);
    read(b, "absorb", "n_per_radius", c.absorb.n_per_radius);
    read(b, "absorb", "band", c.absorb.band);
    read(b, "absorb", "t_end", c.absorb.t_end);
    read(b, "absorb", "floor", c.absorb.floor);
    read(b, "absorb", "rel_tol", c.absorb.rel_tol);
    read(b, "absorb", "min_tail", c.absorb.min_tail);
    for (std::size_t i = 0; i < c.absorb.radii.size(); ++i)
      positive(c.absorb.radii[i], "absorb.radii[" + std::to_string(i) + "]");
  }
  if (j.contains("lipschitz")) {
    const json& b = j.at("lipschitz");
    allow_keys(b, "lipschitz", {"scale", "t_end", "c7_rel_tol"});
    read(b, "lipschitz", "scale", c.lipschitz.scale);
    read(b, "lipschitz", "t_end", c.lipschitz.t_end);
    read(b, "lipschitz", "c7_rel_tol", c.lipschitz.c7_rel_tol);
    positive(c.lipschitz.scale, "lipschitz.scale");
  }
  if (j.contains("check")) {
    const json& b = j.at("check");
    allow_keys(b, "check", {"resolutions", "bg_samples", "energy_dts", "min_order", "energy_abs_tol"});
    read_list(b, "check", "resolutions", c.check.resolutions);
    read(b, "check", "bg_samples", c.check.bg_samples);
    read_list(b, "check", "energy_dts", c.check.energy_dts);
    read(b, "check", "min_order", c.check.min_order);
    read(b, "check", "energy_abs_tol", c.check.energy_abs_tol);
    for (std::size_t n : c.check.resolutions)
      if (n < 2) throw ConfigError("check.resolutions", "entries must be >= 2");
  }

  c.initial_u = resolve_seed(c.initial_u, c.seed, 0);
  c.initial_ut = resolve_seed(c.initial_ut, c.seed, 1);
  if (c.equilibrium.seed_field) c.equilibrium.seed_field = resolve_seed(*c.equilibrium.seed_field, c.seed, 2);
  return c;
}

FieldPreset resolve_seed(FieldPreset p, std::uint64_t seed, std::uint64_t offset) {
  if (p.preset == "random_band" && !p.seed) p.seed = seed + offset;
  return p;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("--config", "cannot open " + path.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j, path.parent_path());
}

json to_json(const RunConfig& c) {
  json nl = {{"a3", c.nl.a3()}, {"a2", c.nl.a2()}, {"a1", c.nl.a1()}};
  if (c.nl.has_lambda_override()) nl["lambda_bound"] = c.nl.lambda_bound();
  json eq = {{"tol", c.equilibrium.tol}, {"max_iter", c.equilibrium.max_iter}};
  if (c.equilibrium.seed_field) eq["seed_field"] = preset_json(*c.equilibrium.seed_field);
  json dec = {{"t_end", c.decompose.t_end},
              {"fit_t0", c.decompose.fit_t0},
              {"max_doublings", c.decompose.max_doublings},
              {"min_r2", c.decompose.min_r2},
              {"sum_tol", c.decompose.sum_tol},
              {"big_l", c.decompose.big_l ? *c.decompose.big_l : default_big_l(c.nl)}};
  if (c.decompose.fit_t1) dec["fit_t1"] = *c.decompose.fit_t1;
  json out = {
      {"seed", c.seed},
      {"grid", {{"n_modes", c.grid.n_modes}, {"side", c.grid.side}}},
      {"nonlinearity", nl},
      {"source", preset_json(c.source)},
      {"initial", {{"u", preset_json(c.initial_u)}, {"ut", preset_json(c.initial_ut)}}},
      {"scheme",
       {{"dt", c.scheme.dt},
        {"scheme", to_string(c.scheme.scheme)},
        {"newton_tol", c.scheme.newton_tol},
        {"newton_max_iter", c.scheme.newton_max_iter},
        {"safeguard_tol", c.scheme.safeguard_tol}}},
      {"t_end", c.t_end},
      {"sample_every", c.sample_every},
      {"snapshot_every", c.snapshot_every},
      {"output_dir", c.output_dir},
      {"converge",
       {{"resolutions", c.converge.resolutions},
        {"n_ref", c.converge.n_ref},
        {"t_star", c.converge.t_star},
        {"samples", c.converge.samples},
        {"max_gap_ratio", c.converge.max_gap_ratio}}},
      {"decompose", dec},
      {"equilibrium", eq},
      {"lojasiewicz",
       {{"t_end", c.lojasiewicz.t_end},
        {"tol", c.lojasiewicz.tol},
        {"eq_tol", c.lojasiewicz.eq_tol},
        {"eq_max_iter", c.lojasiewicz.eq_max_iter},
        {"distance_tol", c.lojasiewicz.distance_tol}}},
      {"absorb",
       {{"radii", c.absorb.radii},
        {"n_per_radius", c.absorb.n_per_radius},
        {"band", c.absorb.band},
        {"t_end", c.absorb.t_end},
        {"floor", c.absorb.floor},
        {"rel_tol", c.absorb.rel_tol},
        {"min_tail", c.absorb.min_tail}}},
      {"lipschitz",
       {{"scale", c.lipschitz.scale}, {"t_end", c.lipschitz.t_end}, {"c7_rel_tol", c.lipschitz.c7_rel_tol}}},
      {"check",
       {{"resolutions", c.check.resolutions},
        {"bg_samples", c.check.bg_samples},
        {"energy_dts", c.check.energy_dts},
        {"min_order", c.check.min_order},
        {"energy_abs_tol", c.check.energy_abs_tol}}},
  };
  if (!c.resume_from.empty()) out["resume_from"] = c.resume_from;
  return out;
}

ModalField build_field(const FieldPreset& p, const GridSpec& grid, const std::string& key) {
  try {
    if (p.preset == "zero") return ModalField(grid);
    if (p.preset == "single_mode") return basis_mode(grid, p.j, p.k, p.amp);
    if (p.preset == "random_band")
      return random_band_limited(grid, p.band, p.amplitude, p.seed.value_or(0));
    if (p.preset == "file") {
      const FieldSnapshot s = load_mfld(p.path);
      if (s.field.grid().side != grid.side) throw ConfigError(key + ".path", "field side does not match grid.side");
      return resample(s.field, grid);
    }
  } catch (const IndexError& e) {
    throw ConfigError(key, e.what());
  } catch (const CorruptFile& e) {
    throw ConfigError(key + ".path", e.what());
  }
  throw ConfigError(key + ".preset", "unknown preset '" + p.preset + "'");
}

State build_initial(const RunConfig& c) {
  return State(build_field(c.initial_u, c.grid, "initial.u"), build_field(c.initial_ut, c.grid, "initial.ut"), 0.0);
}

SourceTerm build_source(const RunConfig& c) { return SourceTerm(build_field(c.source, c.grid, "source")); }

}  // namespace hch
