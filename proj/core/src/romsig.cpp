#include "pirt/romsig.hpp"

namespace pirt {

SumTable gen_table(const FieldSpec& field, std::uint16_t c1, std::uint16_t c2) {
  if (c1 >= field.order() || c2 >= field.order()) {
    throw ConfigError("table coefficients out of field range");
  }
  if (field.m() > 12) {
    throw ConfigError("table generation supports m <= 12");
  }
  const std::uint32_t q = field.order();
  SumTable table(static_cast<std::size_t>(q) * q);
  for (std::uint32_t i = 0; i < q; ++i) {
    const std::uint16_t hi = field.mul(c2, static_cast<std::uint16_t>(i));
    for (std::uint32_t j = 0; j < q; ++j) {
      table[static_cast<std::size_t>(i) * q + j] =
          static_cast<std::uint16_t>(hi ^ field.mul(c1, static_cast<std::uint16_t>(j)));
    }
  }
  return table;
}

SigState rom_signature(std::span<const std::uint8_t> rom, const SumTable& table, SigState seed) {
  if (table.size() != 256) {
    throw ConfigError("rom signature needs a 256-entry table (m = 4)");
  }
  SigState s = seed;
  for (std::uint8_t byte : rom) {
    const std::uint8_t t = static_cast<std::uint8_t>(table[s.msw]);
    const std::uint8_t lsw = static_cast<std::uint8_t>(s.lsw ^ t ^ byte);
    s.msw = s.lsw;
    s.lsw = lsw;
  }
  return s;
}

std::string format_table(const SumTable& table, int m) {
  const std::uint32_t q = 1u << m;
  if (table.size() != static_cast<std::size_t>(q) * q) {
    throw ConfigError("table size does not match the field order");
  }
  std::string out;
  for (std::uint32_t i = 0; i < q; ++i) {
    for (std::uint32_t j = 0; j < q; ++j) {
      if (j) out += ',';
      out += std::to_string(table[static_cast<std::size_t>(i) * q + j]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace pirt
