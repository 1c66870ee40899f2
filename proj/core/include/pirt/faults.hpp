#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pirt/memory.hpp"

namespace pirt {

// Fault primitives use the <S/F/R> notation: S is the sensitizing condition
// (an initial state, optionally followed by up to two read/write operations),
// F the victim value after sensitization, R the value a faulty read returns.
// Two-cell primitives are written <Sa;Sv/F/R> with Sa on the aggressor.

enum class SensOpKind : std::uint8_t { Write, Read };

struct SensOp {
  SensOpKind kind;
  int value;  // written value, or the stored value a sensitizing read sees

  friend bool operator==(const SensOp&, const SensOp&) = default;
};

struct SensitizingSeq {
  int initial_state = 0;
  std::vector<SensOp> ops;  // empty = bare state condition; at most 2

  bool state_only() const { return ops.empty(); }
  /// Cell state immediately before ops[idx] (initial state chained through writes).
  int state_before(std::size_t idx) const;

  friend bool operator==(const SensitizingSeq&, const SensitizingSeq&) = default;
};

struct FaultPrimitive {
  std::optional<SensitizingSeq> aggressor;  // present for two-cell primitives
  SensitizingSeq victim;
  int effect = 0;     // F
  int read_out = -1;  // R; -1 encodes '-'

  bool two_cell() const { return aggressor.has_value(); }
  /// The side whose operations sensitize the fault; nullptr when both sides
  /// are bare states (state faults, CFst).
  const SensitizingSeq* op_side() const;
  bool op_side_is_victim() const { return !victim.ops.empty(); }

  friend bool operator==(const FaultPrimitive&, const FaultPrimitive&) = default;
};

/// Parses "<S/F/R>" or "<Sa;Sv/F/R>". Throws ParseError with a character
/// position on malformed text; ConfigError on semantic violations (R given
/// for a non-read sensitizer, operations on both cells, more than two ops).
FaultPrimitive parse_fp(std::string_view text);

/// Canonical DSL text; parse_fp(unparse_fp(p)) == p.
std::string unparse_fp(const FaultPrimitive& p);

struct CatalogEntry {
  std::string name;
  FaultPrimitive primitive;
};

/// The shipped default catalog: 12 single-cell primitives (SF, TF, WDF, RDF,
/// DRDF, IRF in both polarities) and 32 two-cell coupling primitives (CFst,
/// CFds, CFtr, CFwd, CFrd, CFdrd, CFir).
const std::vector<CatalogEntry>& default_catalog();

/// "WDF0" -> "WDF", "CFds_0w1_0" -> "CFds" (leading letters).
std::string family_name(std::string_view name);

/// A primitive bound to concrete locations. Bits index within the word.
struct FaultInstance {
  FaultPrimitive primitive;
  std::string name;  // catalog or fault-list name
  Address victim_cell = 0;
  int victim_bit = 0;
  std::optional<Address> aggressor_cell;
  std::optional<int> aggressor_bit;
  std::string id;  // stable: name:v<cell>.<bit>[:a<cell>.<bit>]

  static FaultInstance make(const CatalogEntry& entry, Address victim_cell, int victim_bit,
                            std::optional<Address> aggressor_cell = std::nullopt,
                            std::optional<int> aggressor_bit = std::nullopt);
};

enum class PlacementMode { Single, Pairs, AdjacentPairs };

PlacementMode placement_mode_from_string(std::string_view s);

/// Binds catalog primitives to locations. Single-cell primitives go to every
/// (cell, bit). Two-cell primitives are skipped in Single mode, bound to all
/// ordered distinct (cell, bit) pairs in Pairs mode, and to |victim-aggressor|
/// = 1 same-bit pairs in AdjacentPairs mode. Ordering is (primitive, victim,
/// aggressor).
std::vector<FaultInstance> enumerate_instances(const std::vector<CatalogEntry>& catalog,
                                               const MemorySpec& spec, PlacementMode mode);

/// A fault-list file: one DSL primitive per line, '#' comments, optional
/// binding directive "@cell(c[,bit])" or "@pair(a,v[,abit,vbit])" after the
/// primitive. Unbound lines are placed by enumerate_instances.
struct FaultListLine {
  CatalogEntry entry;
  std::optional<FaultInstance> bound;  // present when the line had a directive
};

std::vector<FaultListLine> parse_fault_list(std::istream& in, const MemorySpec& spec);
std::vector<FaultListLine> load_fault_list(const std::string& path, const MemorySpec& spec);

/// Expands a fault list into instances: bound lines verbatim, unbound lines
/// through enumerate_instances.
std::vector<FaultInstance> instances_from_fault_list(const std::vector<FaultListLine>& lines,
                                                     const MemorySpec& spec, PlacementMode mode);

/// Injection layer: wraps a MemoryState and perturbs read/write semantics
/// according to the active fault instances. With no instances it behaves
/// exactly like the raw traced accessors.
class FaultyMemory {
 public:
  explicit FaultyMemory(MemoryState& mem, std::vector<FaultInstance> instances = {});

  Word read(Address addr);
  void write(Address addr, Word value);

  MemoryState& memory() { return *mem_; }
  const MemoryState& memory() const { return *mem_; }
  const MemorySpec& spec() const { return mem_->spec(); }
  const std::vector<FaultInstance>& instances() const { return instances_; }
  bool fault_free() const { return instances_.empty(); }

  /// Clears multi-operation sensitization progress (used on background refill).
  void reset_dynamic_state();

 private:
  Word access(AccessOp op, Address addr, Word wval);

  MemoryState* mem_;
  std::vector<FaultInstance> instances_;
  std::vector<std::uint8_t> progress_;  // matched ops of multi-op sensitizers
};

}  // namespace pirt
