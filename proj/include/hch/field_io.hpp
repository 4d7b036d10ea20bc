// `.mfld` modal field snapshots: one line of UTF-8 JSON
// {"n_modes", "side", "time", "kind", ...} terminated by '\n', followed by the
// N*N coefficients as row-major little-endian float64.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "hch/grid.hpp"

namespace hch {

struct CorruptFile : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FieldSnapshot {
  ModalField field;
  double time = 0.0;
  std::string kind;
};

void write_mfld(std::ostream& os, const ModalField& field, double time, const std::string& kind);
FieldSnapshot read_mfld(std::istream& is);

void save_mfld(const std::filesystem::path& path, const ModalField& field, double time, const std::string& kind);
FieldSnapshot load_mfld(const std::filesystem::path& path);

namespace detail {
void write_f64(std::ostream& os, std::span<const double> values);
void read_f64(std::istream& is, std::span<double> values);
}  // namespace detail

}  // namespace hch
