#include "hch/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace hch {

namespace detail {

void write_f64(std::ostream& os, std::span<const double> values) {
  for (double v : values) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    char buf[8];
    std::memcpy(buf, &bits, 8);
    os.write(buf, 8);
  }
}

void read_f64(std::istream& is, std::span<double> values) {
  for (double& v : values) {
    char buf[8];
    if (!is.read(buf, 8)) throw CorruptFile("truncated coefficient block");
    std::uint64_t bits;
    std::memcpy(&bits, buf, 8);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    v = std::bit_cast<double>(bits);
  }
}

}  // namespace detail

void write_mfld(std::ostream& os, const ModalField& field, double time, const std::string& kind) {
  nlohmann::json header = {{"format", "mfld"},
                           {"version", 1},
                           {"n_modes", field.n()},
                           {"side", field.grid().side},
                           {"time", time},
                           {"kind", kind}};
  os << header.dump() << '\n';
  detail::write_f64(os, field.coeff());
}

FieldSnapshot read_mfld(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw CorruptFile("missing mfld header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFile(std::string("bad mfld header: ") + e.what());
  }
  if (!header.is_object() || header.value("format", "") != "mfld") throw CorruptFile("not an mfld block");
  if (header.value("version", 0) != 1) throw CorruptFile("unsupported mfld version");
  FieldSnapshot snap;
  try {
    const GridSpec grid(header.at("n_modes").get<std::size_t>(), header.at("side").get<double>());
    snap.field = ModalField(grid);
    snap.time = header.at("time").get<double>();
    snap.kind = header.at("kind").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFile(std::string("incomplete mfld header: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw CorruptFile(std::string("invalid mfld grid: ") + e.what());
  }
  detail::read_f64(is, snap.field.coeff());
  return snap;
}

void save_mfld(const std::filesystem::path& path, const ModalField& field, double time, const std::string& kind) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_mfld(os, field, time, kind);
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

FieldSnapshot load_mfld(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read_mfld(is);
}

}  // namespace hch
