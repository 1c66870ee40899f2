#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <random>

#include "pirt/romsig.hpp"

using namespace pirt;

namespace {

// The full 16x16 modular-sum table for p = 19, (c1, c2) = (1, 9), kept as a
// literal fixture.
// clang-format off
constexpr std::array<std::uint16_t, 256> kSumTable{
    0,1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,
    9,8,11,10,13,12,15,14,1,0,3,2,5,4,7,6,
    1,0,3,2,5,4,7,6,9,8,11,10,13,12,15,14,
    8,9,10,11,12,13,14,15,0,1,2,3,4,5,6,7,
    2,3,0,1,6,7,4,5,10,11,8,9,14,15,12,13,
    11,10,9,8,15,14,13,12,3,2,1,0,7,6,5,4,
    3,2,1,0,7,6,5,4,11,10,9,8,15,14,13,12,
    10,11,8,9,14,15,12,13,2,3,0,1,6,7,4,5,
    4,5,6,7,0,1,2,3,12,13,14,15,8,9,10,11,
    13,12,15,14,9,8,11,10,5,4,7,6,1,0,3,2,
    5,4,7,6,1,0,3,2,13,12,15,14,9,8,11,10,
    12,13,14,15,8,9,10,11,4,5,6,7,0,1,2,3,
    6,7,4,5,2,3,0,1,14,15,12,13,10,11,8,9,
    15,14,13,12,11,10,9,8,7,6,5,4,3,2,1,0,
    7,6,5,4,3,2,1,0,15,14,13,12,11,10,9,8,
    14,15,12,13,10,11,8,9,6,7,4,5,2,3,0,1,
};
// clang-format on

SumTable reference_table() { return gen_table(FieldSpec{Poly2(19)}, 1, 9); }

std::vector<std::uint8_t> fixed_rom() {
  // deterministic xorshift32 stream, frozen as the corruption-study image
  std::uint32_t s = 0x12345678u;
  std::vector<std::uint8_t> rom(32);
  for (std::uint8_t& b : rom) {
    s ^= s << 13;
    s ^= s >> 17;
    s ^= s << 5;
    b = static_cast<std::uint8_t>(s & 0xff);
  }
  return rom;
}

}  // namespace

TEST_CASE("gen_table matches the embedded fixture entry for entry") {
  const SumTable table = reference_table();
  REQUIRE(table.size() == 256);
  for (std::size_t i = 0; i < 256; ++i) {
    CAPTURE(i);
    CHECK(table[i] == kSumTable[i]);
  }
}

TEST_CASE("gen_table row 1 spot check") {
  const SumTable table = reference_table();
  const std::vector<std::uint16_t> row1{9, 8, 11, 10, 13, 12, 15, 14, 1, 0, 3, 2, 5, 4, 7, 6};
  for (std::size_t j = 0; j < 16; ++j) CHECK(table[16 + j] == row1[j]);
}

TEST_CASE("gen_table with zero coefficients is all zeros") {
  const SumTable table = gen_table(FieldSpec{Poly2(19)}, 0, 0);
  for (std::uint16_t v : table) CHECK(v == 0);
}

TEST_CASE("gen_table validates coefficients and supports other widths") {
  CHECK_THROWS_AS(gen_table(FieldSpec{Poly2(19)}, 16, 1), ConfigError);
  const SumTable small = gen_table(FieldSpec{Poly2(7)}, 1, 2);
  CHECK(small.size() == 16);
  CHECK(small[4 * 1 + 0] == 2);  // c2 * 1 in GF(4)
  CHECK(small[4 * 3 + 3] == (FieldSpec{Poly2(7)}.mul(2, 3) ^ 3));
}

TEST_CASE("format_table renders comma-separated decimal rows") {
  const std::string text = format_table(reference_table(), 4);
  CHECK(text.substr(0, text.find('\n')) == "0,1,2,3,4,5,6,7,8,9,10,11,12,13,14,15");
  std::size_t rows = 0;
  for (char c : text) rows += c == '\n';
  CHECK(rows == 16);
}

TEST_CASE("rom_signature worked examples") {
  const SumTable table = reference_table();
  {
    const std::vector<std::uint8_t> rom(16, 0);
    CHECK(rom_signature(rom, table, {}) == SigState{0, 0});
  }
  {
    const std::vector<std::uint8_t> rom{1};
    CHECK(rom_signature(rom, table, {}) == SigState{0, 1});
  }
  {
    const std::vector<std::uint8_t> rom{1, 0};
    CHECK(rom_signature(rom, table, {}) == SigState{1, 1});
  }
  {
    const std::vector<std::uint8_t> empty;
    const SigState seed{0xAB, 0xCD};
    CHECK(rom_signature(empty, table, seed) == seed);
  }
}

TEST_CASE("rom_signature requires the 256-entry table") {
  const SumTable small = gen_table(FieldSpec{Poly2(7)}, 1, 2);
  const std::vector<std::uint8_t> rom{1, 2, 3};
  CHECK_THROWS_AS(rom_signature(rom, small, {}), ConfigError);
}

TEST_CASE("rom_signature composes over concatenation") {
  const SumTable table = reference_table();
  std::mt19937 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint8_t> rom(1 + rng() % 64);
    for (auto& b : rom) b = static_cast<std::uint8_t>(rng() & 0xff);
    const std::size_t cut = rng() % (rom.size() + 1);
    const std::vector<std::uint8_t> head(rom.begin(), rom.begin() + cut);
    const std::vector<std::uint8_t> tail(rom.begin() + cut, rom.end());
    const SigState whole = rom_signature(rom, table, {});
    const SigState split = rom_signature(tail, table, rom_signature(head, table, {}));
    CHECK(whole == split);
  }
}

TEST_CASE("corruption sensitivity of the fixed 32-byte rom is frozen") {
  const SumTable table = reference_table();
  const std::vector<std::uint8_t> rom = fixed_rom();
  const SigState base = rom_signature(rom, table, {});
  std::size_t changed = 0;
  for (std::size_t i = 0; i < rom.size(); ++i) {
    for (int delta = 1; delta < 256; ++delta) {
      std::vector<std::uint8_t> bad = rom;
      bad[i] = static_cast<std::uint8_t>(bad[i] ^ delta);
      if (rom_signature(bad, table, {}) != base) ++changed;
    }
  }
  MESSAGE("changed = ", changed, " of ", rom.size() * 255);
  CHECK(changed == 999999);  // frozen after the first brute-force run
}
