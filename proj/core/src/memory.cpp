#include "pirt/memory.hpp"

namespace pirt {

void MemorySpec::validate() const {
  if (n_cells == 0) throw ConfigError("memory needs at least one cell");
  if (word_bits < 1 || word_bits > 16) throw ConfigError("word width must be 1..16 bits");
  if (read_ports != 1 && read_ports != 2) throw ConfigError("read_ports must be 1 or 2");
  if (write_ports != 1) throw ConfigError("write_ports must be 1");
}

int cycles_per_step(int k, int read_ports) {
  return (k + read_ports - 1) / read_ports + 1;
}

MemoryState::MemoryState(MemorySpec spec, Word fill) : spec_(spec) {
  spec_.validate();
  check_value(fill);
  cells_.assign(spec_.n_cells, fill);
}

void MemoryState::check_address(Address addr) const {
  if (addr >= spec_.n_cells) {
    throw ConfigError("address " + std::to_string(addr) + " out of range (N=" +
                      std::to_string(spec_.n_cells) + ")");
  }
}

void MemoryState::check_value(Word value) const {
  if (value > spec_.word_mask()) {
    throw ConfigError("value " + std::to_string(value) + " exceeds word width");
  }
}

Word MemoryState::read(Address addr) {
  const Word v = peek(addr);
  record(AccessOp::Read, addr, v);
  return v;
}

void MemoryState::write(Address addr, Word value) {
  poke(addr, value);
  record(AccessOp::Write, addr, value);
}

Word MemoryState::peek(Address addr) const {
  check_address(addr);
  return cells_[addr];
}

void MemoryState::poke(Address addr, Word value) {
  check_address(addr);
  check_value(value);
  cells_[addr] = value;
}

void MemoryState::fill(Word value) {
  check_value(value);
  cells_.assign(spec_.n_cells, value);
}

void MemoryState::record(AccessOp op, Address addr, Word value, std::string note) {
  trace_.push_back(AccessRecord{op, addr, value, cycle_counter_, std::move(note)});
}

}  // namespace pirt
