#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pirt/faults.hpp"
#include "pirt/galois.hpp"
#include "pirt/memory.hpp"

namespace pirt {

enum class TrajectoryKind { Up, Down, Pseudorandom };

/// Address ordering along which the virtual register slides. Pseudorandom
/// trajectories use a maximal-length bit LFSR over w = ceil(log2(n+1)) bits.
struct Trajectory {
  TrajectoryKind kind = TrajectoryKind::Up;
  Poly2 addr_poly{};        // pseudorandom only; must be maximal of degree w
  std::uint32_t addr_seed = 1;
};

/// Realizes the trajectory as a permutation of 0..n-1. Pseudorandom: the
/// address LFSR runs a full period starting from addr_seed, each state s is
/// mapped to address s-1, and values >= n are skipped.
std::vector<Address> realize_trajectory(const Trajectory& t, Address n);

/// `Output` complements every value read into the feedback computation;
/// `Input` complements the feedback value before it is written back.
enum class InversionMode { None, Input, Output, InputOutput };

enum class Scheme { Ring, Scan };

/// Feedback structure over a word: either one register over GF(2^word_bits),
/// or a group of independent lane registers whose widths sum to the word
/// width. All lanes must share the same register length k.
class FeedbackNetwork {
 public:
  static FeedbackNetwork whole_word(FeedbackSpec fb);
  static FeedbackNetwork lanes(std::vector<FeedbackSpec> lane_specs);

  bool is_whole_word() const { return lanes_.size() == 1; }
  int k() const { return lanes_.front().k(); }
  int word_bits() const { return word_bits_; }
  const std::vector<FeedbackSpec>& lane_specs() const { return lanes_; }
  /// The single spec of a whole-word network.
  const FeedbackSpec& whole() const;

  /// One recurrence step on a window of k words.
  Word next(std::span<const Word> window) const;

 private:
  explicit FeedbackNetwork(std::vector<FeedbackSpec> lanes);
  std::vector<FeedbackSpec> lanes_;
  std::vector<int> offsets_;  // bit offset of each lane within the word
  int word_bits_;
};

/// The four per-iteration control parameters plus scheme and bookkeeping
/// options. `steps` defaults to N; `refill` rewrites the whole array to the
/// given background before the iteration starts (outside cycle accounting).
struct IterationConfig {
  explicit IterationConfig(FeedbackNetwork fb) : feedback(std::move(fb)) {}

  FeedbackNetwork feedback;
  std::vector<Word> seed;
  Trajectory trajectory;
  InversionMode inversion = InversionMode::None;
  Scheme scheme = Scheme::Ring;
  std::optional<Poly2> misr_poly;  // ring scheme; defaults to the field polynomial
  std::optional<std::uint32_t> steps;
  std::optional<Word> refill;

  void validate(const MemorySpec& spec) const;
  Poly2 resolved_misr_poly() const;
  std::uint32_t resolved_steps(const MemorySpec& spec) const;
};

struct Schedule {
  std::vector<IterationConfig> iterations;
};

struct IterationOutcome {
  std::vector<Word> final_window;
  std::vector<Word> golden_window;
  std::optional<Word> signature;
  std::optional<Word> golden_signature;
  bool detected = false;
  std::uint64_t cycles = 0;
};

/// One step of a multiple-input signature register: Galois-style shift with
/// feedback taps from misr_poly, then XOR of the input into the low stages.
Word misr_step(Word sig, Word input, Poly2 misr_poly);

/// One pi-iteration bound to a memory. Phases can be driven individually
/// (init / push_step / unload) or all at once via run().
class PiIteration {
 public:
  PiIteration(FaultyMemory& mem, IterationConfig cfg);

  void init();
  /// Reads the k window cells at trajectory positions t..t+k-1 (mod N),
  /// computes the feedback value and writes it to position t+k (mod N).
  /// Returns the written value.
  Word push_step(std::uint32_t t);
  std::vector<Word> unload();
  IterationOutcome run();

  std::uint32_t steps() const { return steps_; }
  const std::vector<Address>& trajectory() const { return traj_; }
  const std::vector<Word>& golden_window() const { return golden_; }

 private:
  Word invert_in(Word v) const;
  Word invert_out(Word v) const;

  FaultyMemory& mem_;
  IterationConfig cfg_;
  std::vector<Address> traj_;
  std::vector<Word> golden_;  // raw window values of the fault-free replica
  std::vector<Word> shadow_;  // scan scheme: copy of the last window read
  Word misr_ = 0;
  Word golden_misr_ = 0;
  Poly2 misr_poly_;
  std::uint32_t steps_;
  int k_;
  Word mask_;
  bool ring_;
};

IterationOutcome run_iteration(FaultyMemory& mem, const IterationConfig& cfg);

/// Runs the schedule's iterations in order on one persistent memory; contents
/// carry over between iterations unless a config requests a refill.
std::vector<IterationOutcome> run_schedule(FaultyMemory& mem, const Schedule& schedule);

inline bool overall_detected(const std::vector<IterationOutcome>& outcomes) {
  for (const IterationOutcome& o : outcomes) {
    if (o.detected) return true;
  }
  return false;
}

}  // namespace pirt
