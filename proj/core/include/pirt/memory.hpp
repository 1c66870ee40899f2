#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pirt/errors.hpp"

namespace pirt {

using Word = std::uint16_t;
using Address = std::uint32_t;

enum class AccessOp : std::uint8_t { Read, Write };

/// One memory access as seen from outside the array: for reads `value` is the
/// value returned to the requester, for writes the value the requester wrote.
/// `note` lists ids of fault instances that fired on this access.
struct AccessRecord {
  AccessOp op;
  Address address;
  Word value;
  std::uint64_t cycle;
  std::string note;
};

/// Geometry of the RAM under test.
struct MemorySpec {
  Address n_cells = 0;
  int word_bits = 1;
  int read_ports = 1;
  int write_ports = 1;

  void validate() const;
  Word word_mask() const { return static_cast<Word>((1u << word_bits) - 1); }
};

/// Cycles one push step costs: the k window reads grouped across the read
/// ports, plus one write cycle.
int cycles_per_step(int k, int read_ports);

/// The simulated cell array with an access trace and a cycle counter.
/// Cycle accounting is owned by the engine; plain accesses only stamp records
/// with the current counter value.
class MemoryState {
 public:
  MemoryState(MemorySpec spec, Word fill);

  const MemorySpec& spec() const { return spec_; }
  const std::vector<Word>& cells() const { return cells_; }

  /// Traced access path (fault-free semantics).
  Word read(Address addr);
  void write(Address addr, Word value);

  /// Untraced raw access, used by the fault layer and for background refills.
  Word peek(Address addr) const;
  void poke(Address addr, Word value);
  void fill(Word value);

  void record(AccessOp op, Address addr, Word value, std::string note = {});

  const std::vector<AccessRecord>& trace() const { return trace_; }
  void clear_trace() { trace_.clear(); }

  std::uint64_t cycles() const { return cycle_counter_; }
  void add_cycles(std::uint64_t n) { cycle_counter_ += n; }

 private:
  void check_address(Address addr) const;
  void check_value(Word value) const;

  MemorySpec spec_;
  std::vector<Word> cells_;
  std::vector<AccessRecord> trace_;
  std::uint64_t cycle_counter_ = 0;
};

}  // namespace pirt
