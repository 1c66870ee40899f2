#include "pirt/engine.hpp"

#include <algorithm>

namespace pirt {

namespace {

int address_bits(Address n) {
  int w = 1;
  while ((1u << w) - 1 < n) ++w;  // need 2^w - 1 >= n nonzero states
  return w;
}

}  // namespace

std::vector<Address> realize_trajectory(const Trajectory& t, Address n) {
  if (n == 0) throw ConfigError("trajectory needs n >= 1");
  std::vector<Address> order;
  order.reserve(n);
  switch (t.kind) {
    case TrajectoryKind::Up:
      for (Address a = 0; a < n; ++a) order.push_back(a);
      return order;
    case TrajectoryKind::Down:
      for (Address a = n; a-- > 0;) order.push_back(a);
      return order;
    case TrajectoryKind::Pseudorandom:
      break;
  }

  const int w = address_bits(n);
  if (t.addr_poly.degree() != w) {
    throw ConfigError("address polynomial degree must be " + std::to_string(w) +
                      " for n=" + std::to_string(n));
  }
  FeedbackSpec fb = bit_lfsr(t.addr_poly);
  {
    std::vector<Word> probe(static_cast<std::size_t>(w), 0);
    probe[0] = 1;
    if (sequence_period(fb, probe) != (1ull << w) - 1) {
      throw ConfigError("address polynomial is not maximal-length");
    }
  }
  if (t.addr_seed == 0 || t.addr_seed >= (1u << w)) {
    throw ConfigError("address seed must be a nonzero " + std::to_string(w) + "-bit value");
  }

  std::vector<Word> window(static_cast<std::size_t>(w));
  for (int i = 0; i < w; ++i) window[static_cast<std::size_t>(i)] = (t.addr_seed >> i) & 1u;
  const std::uint32_t period = (1u << w) - 1;
  for (std::uint32_t s = 0; s < period; ++s) {
    std::uint32_t state = 0;
    for (int i = 0; i < w; ++i) state |= static_cast<std::uint32_t>(window[static_cast<std::size_t>(i)]) << i;
    const Address mapped = state - 1;
    if (mapped < n) order.push_back(mapped);
    const Word nxt = glfsr_next(fb, window);
    for (std::size_t j = 0; j + 1 < window.size(); ++j) window[j] = window[j + 1];
    window.back() = nxt;
  }
  if (order.size() != n) {
    throw ConsistencyError("pseudorandom trajectory did not cover the address space");
  }
  return order;
}

FeedbackNetwork::FeedbackNetwork(std::vector<FeedbackSpec> lanes) : lanes_(std::move(lanes)) {
  if (lanes_.empty()) throw ConfigError("feedback network needs at least one lane");
  const int k = lanes_.front().k();
  int bits = 0;
  offsets_.reserve(lanes_.size());
  for (const FeedbackSpec& lane : lanes_) {
    if (lane.k() != k) throw ConfigError("all lanes must share the register length k");
    offsets_.push_back(bits);
    bits += lane.field().m();
  }
  if (bits > 16) throw ConfigError("lane widths sum to more than 16 bits");
  word_bits_ = bits;
}

FeedbackNetwork FeedbackNetwork::whole_word(FeedbackSpec fb) {
  return FeedbackNetwork(std::vector<FeedbackSpec>{std::move(fb)});
}

FeedbackNetwork FeedbackNetwork::lanes(std::vector<FeedbackSpec> lane_specs) {
  return FeedbackNetwork(std::move(lane_specs));
}

const FeedbackSpec& FeedbackNetwork::whole() const {
  if (!is_whole_word()) throw ConfigError("feedback network is not whole-word");
  return lanes_.front();
}

Word FeedbackNetwork::next(std::span<const Word> window) const {
  if (static_cast<int>(window.size()) != k()) {
    throw ConfigError("window length must equal register length k");
  }
  if (is_whole_word()) return glfsr_next(lanes_.front(), window);
  Word out = 0;
  std::vector<Word> slice(window.size());
  for (std::size_t l = 0; l < lanes_.size(); ++l) {
    const FeedbackSpec& lane = lanes_[l];
    const int off = offsets_[l];
    const Word lane_mask = lane.field().max_element();
    for (std::size_t j = 0; j < window.size(); ++j) {
      slice[j] = static_cast<Word>((window[j] >> off) & lane_mask);
    }
    out = static_cast<Word>(out | (glfsr_next(lane, slice) << off));
  }
  return out;
}

Poly2 IterationConfig::resolved_misr_poly() const {
  if (misr_poly) return *misr_poly;
  if (!feedback.is_whole_word()) {
    throw ConfigError("ring scheme with lane feedback needs an explicit misr_poly");
  }
  return feedback.whole().field().p();
}

std::uint32_t IterationConfig::resolved_steps(const MemorySpec& spec) const {
  return steps.value_or(spec.n_cells);
}

void IterationConfig::validate(const MemorySpec& spec) const {
  spec.validate();
  const int k = feedback.k();
  if (feedback.word_bits() != spec.word_bits) {
    throw ConfigError("feedback word width does not match the memory word width");
  }
  if (static_cast<int>(seed.size()) != k) {
    throw ConfigError("seed length must equal register length k");
  }
  for (Word s : seed) {
    if (s > spec.word_mask()) throw ConfigError("seed word exceeds word width");
  }
  if (inversion == InversionMode::None &&
      std::all_of(seed.begin(), seed.end(), [](Word s) { return s == 0; })) {
    throw ConfigError("all-zero seed is absorbing without inversion");
  }
  if (spec.n_cells < static_cast<Address>(k) + 1) {
    throw ConfigError("memory must have at least k+1 cells");
  }
  if (scheme == Scheme::Ring) {
    const Poly2 mp = resolved_misr_poly();
    const int d = mp.degree();
    if (d < spec.word_bits || d > 16) {
      throw ConfigError("misr polynomial degree must be in [word_bits, 16]");
    }
  }
  if (steps && *steps == 0) throw ConfigError("steps must be >= 1");
  if (refill && *refill > spec.word_mask()) throw ConfigError("refill value exceeds word width");
  // A pseudorandom trajectory is validated when realized.
}

Word misr_step(Word sig, Word input, Poly2 misr_poly) {
  const int d = misr_poly.degree();
  if (d < 1 || d > 16) throw ConfigError("misr polynomial degree must be 1..16");
  const Word mask = static_cast<Word>((1u << d) - 1);
  if (sig > mask || input > mask) throw ConfigError("misr width mismatch");
  const bool top = (sig >> (d - 1)) & 1u;
  sig = static_cast<Word>((sig << 1) & mask);
  if (top) sig = static_cast<Word>(sig ^ (misr_poly.bits & mask));
  return static_cast<Word>(sig ^ input);
}

PiIteration::PiIteration(FaultyMemory& mem, IterationConfig cfg)
    : mem_(mem), cfg_(std::move(cfg)) {
  const MemorySpec& spec = mem_.spec();
  cfg_.validate(spec);
  traj_ = realize_trajectory(cfg_.trajectory, spec.n_cells);
  golden_ = cfg_.seed;
  shadow_.assign(cfg_.seed.size(), 0);
  misr_poly_ = cfg_.scheme == Scheme::Ring ? cfg_.resolved_misr_poly() : Poly2{};
  steps_ = cfg_.resolved_steps(spec);
  k_ = cfg_.feedback.k();
  mask_ = spec.word_mask();
  ring_ = cfg_.scheme == Scheme::Ring;
}

Word PiIteration::invert_out(Word v) const {
  return (cfg_.inversion == InversionMode::Output || cfg_.inversion == InversionMode::InputOutput)
             ? static_cast<Word>(~v & mask_)
             : v;
}

Word PiIteration::invert_in(Word v) const {
  return (cfg_.inversion == InversionMode::Input || cfg_.inversion == InversionMode::InputOutput)
             ? static_cast<Word>(~v & mask_)
             : v;
}

void PiIteration::init() {
  for (int j = 0; j < k_; ++j) {
    mem_.write(traj_[static_cast<std::size_t>(j)], cfg_.seed[static_cast<std::size_t>(j)]);
    mem_.memory().add_cycles(1);
  }
  golden_ = cfg_.seed;
}

Word PiIteration::push_step(std::uint32_t t) {
  const Address n = mem_.spec().n_cells;
  std::vector<Word> raw(static_cast<std::size_t>(k_));
  for (int j = 0; j < k_; ++j) {
    const Address a = traj_[(t + static_cast<Address>(j)) % n];
    raw[static_cast<std::size_t>(j)] = mem_.read(a);
    if (ring_) misr_ = misr_step(misr_, raw[static_cast<std::size_t>(j)], misr_poly_);
  }
  shadow_ = raw;
  if (mem_.fault_free() && cfg_.scheme == Scheme::Scan && shadow_ != golden_) {
    throw ConsistencyError("shadow register diverged from the golden model on a fault-free run");
  }

  std::vector<Word> fed(raw);
  for (Word& v : fed) v = invert_out(v);
  const Word written = invert_in(cfg_.feedback.next(fed));
  mem_.write(traj_[(t + static_cast<Address>(k_)) % n], written);
  mem_.memory().add_cycles(
      static_cast<std::uint64_t>(cycles_per_step(k_, mem_.spec().read_ports)));

  // Golden replica of the same step.
  if (ring_) {
    for (Word g : golden_) golden_misr_ = misr_step(golden_misr_, g, misr_poly_);
  }
  std::vector<Word> gfed(golden_);
  for (Word& v : gfed) v = invert_out(v);
  const Word gw = invert_in(cfg_.feedback.next(gfed));
  for (std::size_t j = 0; j + 1 < golden_.size(); ++j) golden_[j] = golden_[j + 1];
  golden_.back() = gw;
  return written;
}

std::vector<Word> PiIteration::unload() {
  const Address n = mem_.spec().n_cells;
  std::vector<Word> final_window(static_cast<std::size_t>(k_));
  for (int j = 0; j < k_; ++j) {
    const Address a = traj_[(steps_ + static_cast<Address>(j)) % n];
    final_window[static_cast<std::size_t>(j)] = mem_.read(a);
    mem_.memory().add_cycles(1);
    if (ring_) {
      misr_ = misr_step(misr_, final_window[static_cast<std::size_t>(j)], misr_poly_);
      golden_misr_ = misr_step(golden_misr_, golden_[static_cast<std::size_t>(j)], misr_poly_);
    }
  }
  return final_window;
}

IterationOutcome PiIteration::run() {
  if (cfg_.refill) {
    mem_.memory().fill(*cfg_.refill);
    mem_.reset_dynamic_state();
  }
  const std::uint64_t cycles_before = mem_.memory().cycles();
  init();
  for (std::uint32_t t = 0; t < steps_; ++t) push_step(t);
  IterationOutcome out;
  out.final_window = unload();
  out.golden_window = golden_;
  if (ring_) {
    out.signature = misr_;
    out.golden_signature = golden_misr_;
  }
  out.detected = out.final_window != out.golden_window ||
                 (out.signature && out.signature != out.golden_signature);
  out.cycles = mem_.memory().cycles() - cycles_before;
  return out;
}

IterationOutcome run_iteration(FaultyMemory& mem, const IterationConfig& cfg) {
  return PiIteration(mem, cfg).run();
}

std::vector<IterationOutcome> run_schedule(FaultyMemory& mem, const Schedule& schedule) {
  if (schedule.iterations.empty()) throw ConfigError("schedule needs at least one iteration");
  std::vector<IterationOutcome> outcomes;
  outcomes.reserve(schedule.iterations.size());
  for (const IterationConfig& cfg : schedule.iterations) {
    outcomes.push_back(run_iteration(mem, cfg));
  }
  return outcomes;
}

}  // namespace pirt
