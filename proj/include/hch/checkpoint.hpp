// `.ckpt` files: one JSON header line, then `.mfld` blocks for u and u_t,
// followed by the source term and (when present) the AB2 history term.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "hch/integrator.hpp"

namespace hch {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  State state;
  SchemeConfig scheme;
  Nonlinearity nonlinearity;
  SourceTerm source;
  std::uint64_t step = 0;
  std::uint64_t seed = 0;
  double origin_time = 0.0;
  double dissipation = 0.0;
  double scheme_dissipation = 0.0;
  std::optional<ModalField> history;
};

Checkpoint capture(const Integrator& integ, std::uint64_t seed);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Rebuild an integrator at the saved position. Refuses to resume when the
/// caller's grid or nonlinearity differ from the saved ones.
Integrator resume(const Checkpoint& ck, const GridSpec& expected_grid, const Nonlinearity& expected_nl);
Integrator resume(const Checkpoint& ck);

}  // namespace hch
