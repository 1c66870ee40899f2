#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pirt/galois.hpp"

namespace pirt {

/// Two-stage register signature over a ROM image: msw/lsw byte pair.
struct SigState {
  std::uint8_t msw = 0;
  std::uint8_t lsw = 0;

  friend bool operator==(const SigState&, const SigState&) = default;
};

/// Precomputed modular-sum table: entry(i * 2^m + j) = c2*i xor c1*j in the
/// field. For GF(2^4) with (c1, c2) = (1, 9) this is the 256-entry table the
/// embedded signature routine uses.
using SumTable = std::vector<std::uint16_t>;

SumTable gen_table(const FieldSpec& field, std::uint16_t c1, std::uint16_t c2);

/// Runs the embedded signature step over every ROM byte in address order:
/// (msw', lsw') = (lsw, lsw ^ table[msw] ^ byte). The table is indexed by the
/// full previous msw byte and its 0..15 value is XORed as a byte. Requires a
/// 256-entry table.
SigState rom_signature(std::span<const std::uint8_t> rom, const SumTable& table, SigState seed);

/// Table text: 2^m rows of 2^m comma-separated decimal values.
std::string format_table(const SumTable& table, int m);

}  // namespace pirt
