#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pirt/engine.hpp"
#include "pirt/faults.hpp"
#include "pirt/galois.hpp"
#include "pirt/memory.hpp"

namespace pirt {

// March notation: elements separated by ';', each "dir(op, op, ...)" with
// dir u (up), d (down) or a (any, interpreted as up). Operations:
//   w0 w1 r0 r1   constant write / read-and-compare; 1 means the all-ones word
//   rX            read, compared against the fault-free shadow value
//   r[i+j]        read at offset j along the direction, compared to shadow
//   w[i+j]=EXPR   computed write; EXPR = terms joined by '^', each term
//                 "r[i+j]" optionally prefixed "c*" for a field-constant c
// Offsets count positions along the element's direction: in a down element
// "i+1" is the next lower address. Addresses wrap modulo N.

enum class MarchDir { Up, Down, Any };

struct ExprTerm {
  Word coeff = 1;
  int offset = 0;

  friend bool operator==(const ExprTerm&, const ExprTerm&) = default;
};

struct MarchOp {
  enum class Kind { ReadConst, ReadOffset, WriteConst, WriteExpr };
  Kind kind;
  int value = 0;   // ReadConst / WriteConst: 0 or 1 (1 = all-ones word)
  int offset = 0;  // ReadOffset / WriteExpr
  std::vector<ExprTerm> expr;

  friend bool operator==(const MarchOp&, const MarchOp&) = default;
};

struct MarchElement {
  MarchDir dir;
  std::vector<MarchOp> ops;

  friend bool operator==(const MarchElement&, const MarchElement&) = default;
};

struct MarchAlgorithm {
  std::vector<MarchElement> elements;
  /// Field for coefficient multiplication in computed writes; plain XOR
  /// expressions work without it.
  std::optional<FieldSpec> field;
};

MarchAlgorithm parse_march(std::string_view text);
std::string unparse_march(const MarchAlgorithm& alg);

struct MarchReadLog {
  std::size_t element;
  Address index;    // loop position along the direction
  Address address;  // resolved cell address
  Word expected;
  Word actual;
  bool mismatch;
};

struct MarchRun {
  bool detected = false;
  std::vector<MarchReadLog> reads;
  std::vector<Word> final_shadow;  // fault-free expected contents after the run
};

/// Executes the algorithm against the (possibly fault-wrapped) memory.
/// Expected values come from a fault-free shadow copy, initialized from
/// `shadow_init` when given, else from the memory's current contents.
MarchRun run_march(const MarchAlgorithm& alg, FaultyMemory& mem,
                   std::optional<std::vector<Word>> shadow_init = std::nullopt);

struct MarchDetectionRow {
  FaultInstance instance;
  bool detected;
};

/// Runs the algorithm once per instance on a fresh memory filled with `fill`.
std::vector<MarchDetectionRow> march_detect(const MarchAlgorithm& alg, const MemorySpec& spec,
                                            Word fill, std::span<const FaultInstance> instances);

/// The single-element March description of a pi-iteration: k reads of the
/// window followed by the computed feedback write. Requires a whole-word
/// up/down configuration without inversion and k <= 4.
MarchAlgorithm pi_as_march(const IterationConfig& cfg);

}  // namespace pirt
