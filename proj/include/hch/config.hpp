// JSON run configuration shared by every subcommand. Unknown keys and bad
// values raise ConfigError naming the offending key; defaults are resolved so
// the effective configuration can be echoed and replayed.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hch/integrator.hpp"
#include "json.hpp"

namespace hch {

struct ConfigError : std::runtime_error {
  ConfigError(const std::string& key, const std::string& msg) : std::runtime_error(key + ": " + msg), key(key) {}
  std::string key;
};

/// zero | single_mode(j, k, amp) | random_band(band, amplitude, seed) | file(path)
struct FieldPreset {
  std::string preset = "zero";
  std::size_t j = 1;
  std::size_t k = 1;
  double amp = 1.0;
  std::size_t band = 4;
  double amplitude = 1.0;
  std::optional<std::uint64_t> seed;
  std::string path;
};

inline FieldPreset random_band_default() {
  FieldPreset p;
  p.preset = "random_band";
  return p;
}

struct ConvergeBlock {
  std::vector<std::size_t> resolutions{16, 32, 64};
  std::size_t n_ref = 256;
  double t_star = 0.25;
  std::size_t samples = 25;
  double max_gap_ratio = 0.25;  // gap(max N) / gap(min N)
};

struct DecomposeBlock {
  std::optional<double> big_l;  // default max(10, 2 lambda)
  double t_end = 10.0;
  double fit_t0 = 1.0;
  std::optional<double> fit_t1;
  int max_doublings = 3;
  double min_r2 = 0.9;
  double sum_tol = 1e-9;
};

struct EquilibriumBlock {
  double tol = 1e-10;
  int max_iter = 50;
  std::optional<FieldPreset> seed_field;  // default: initial u
};

struct LojasiewiczBlock {
  double t_end = 200.0;
  double tol = 1e-6;
  double eq_tol = 1e-10;
  int eq_max_iter = 50;
  double distance_tol = 1e-4;
};

struct AbsorbBlock {
  std::vector<double> radii{0.5, 1.0, 2.0};
  std::size_t n_per_radius = 2;
  std::size_t band = 4;
  double t_end = 40.0;
  double floor = 1e-3;
  double rel_tol = 0.1;
  double min_tail = 10.0;
};

struct LipschitzBlock {
  double scale = 1e-6;
  double t_end = 5.0;
  double c7_rel_tol = 0.1;
};

struct CheckBlock {
  std::vector<std::size_t> resolutions{32, 64, 128};
  std::size_t bg_samples = 8;
  std::vector<double> energy_dts{1e-2, 5e-3, 2.5e-3};
  double min_order = 1.8;
  double energy_abs_tol = 1e-6;
};

struct RunConfig {
  std::uint64_t seed = 0;
  GridSpec grid{32, std::numbers::pi};
  Nonlinearity nl;
  FieldPreset source;
  FieldPreset initial_u = random_band_default();
  FieldPreset initial_ut;
  SchemeConfig scheme;
  double t_end = 1.0;
  std::size_t sample_every = 10;
  std::size_t snapshot_every = 0;  // steps between .mfld snapshots; 0 = final only
  std::string output_dir = "run";
  std::string resume_from;  // checkpoint path, empty = fresh start

  ConvergeBlock converge;
  DecomposeBlock decompose;
  EquilibriumBlock equilibrium;
  LojasiewiczBlock lojasiewicz;
  AbsorbBlock absorb;
  LipschitzBlock lipschitz;
  CheckBlock check;
};

/// Relative file paths are resolved against `base_dir`.
RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Effective configuration with every default and derived seed filled in.
nlohmann::json to_json(const RunConfig& cfg);

/// Seeds of random presets that do not carry their own: top-level seed + offset.
FieldPreset resolve_seed(FieldPreset p, std::uint64_t seed, std::uint64_t offset);

ModalField build_field(const FieldPreset& p, const GridSpec& grid, const std::string& key);
State build_initial(const RunConfig& cfg);
SourceTerm build_source(const RunConfig& cfg);

}  // namespace hch
