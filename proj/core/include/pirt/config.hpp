#pragma once

#include <iosfwd>
#include <string>

#include "pirt/engine.hpp"
#include "pirt/memory.hpp"

namespace pirt {

// Line-oriented "key = value" config with '#' comments. A "[memory]" section
// sets the array geometry; each "[iteration]" section appends one iteration:
//
//   [memory]
//   n = 16            # cells
//   word_bits = 1
//   read_ports = 1
//   fill = 0          # initial background
//
//   [iteration]
//   p = 3             # field generator polynomial (decimal, 0b... or 0x...)
//   q_coeffs = 1,1    # c1..ck
//   seed = 1,0
//   trajectory = up   # up | down | pseudorandom
//   addr_poly = 37    # pseudorandom only
//   addr_seed = 1
//   inversion = none  # none | input | output | input_output
//   scheme = ring     # ring | scan
//   misr_poly = 19
//   steps = 16        # default n
//   refill = 0        # rewrite the array to this background first

struct MemoryConfig {
  MemorySpec spec;
  Word fill = 0;
};

struct RunConfig {
  MemoryConfig memory;
  Schedule schedule;
  std::string config_hash;  // fnv1a-64 of the config bytes, hex
};

RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::string& path);

/// Integer literal: decimal, 0b binary or 0x hex.
std::uint32_t parse_int_literal(const std::string& text);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace pirt
