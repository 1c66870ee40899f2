#include "pirt/faults.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace pirt {

int SensitizingSeq::state_before(std::size_t idx) const {
  int st = initial_state;
  for (std::size_t i = 0; i < idx && i < ops.size(); ++i) {
    if (ops[i].kind == SensOpKind::Write) st = ops[i].value;
  }
  return st;
}

const SensitizingSeq* FaultPrimitive::op_side() const {
  if (!victim.ops.empty()) return &victim;
  if (aggressor && !aggressor->ops.empty()) return &*aggressor;
  return nullptr;
}

namespace {

struct FpParser {
  std::string_view s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  char take() {
    skip_ws();
    if (pos >= s.size()) throw ParseError("unexpected end of fault primitive", pos);
    return s[pos++];
  }
  void expect(char c) {
    const char g = take();
    if (g != c) throw ParseError(std::string("expected '") + c + "'", pos - 1);
  }
  int digit01() {
    const char c = take();
    if (c != '0' && c != '1') throw ParseError("expected 0 or 1", pos - 1);
    return c - '0';
  }

  SensitizingSeq seq() {
    SensitizingSeq q;
    q.initial_state = digit01();
    int st = q.initial_state;
    while (peek() == 'w' || peek() == 'r') {
      const char c = take();
      if (q.ops.size() == 2) {
        throw ConfigError("at most two sensitizing operations are supported");
      }
      const int v = digit01();
      if (c == 'r' && v != st) {
        throw ParseError("sensitizing read value must match the cell state", pos - 1);
      }
      q.ops.push_back(SensOp{c == 'w' ? SensOpKind::Write : SensOpKind::Read, v});
      if (c == 'w') st = v;
    }
    return q;
  }
};

}  // namespace

FaultPrimitive parse_fp(std::string_view text) {
  FpParser p{text};
  p.expect('<');
  SensitizingSeq first = p.seq();
  FaultPrimitive fp;
  if (p.peek() == ';') {
    p.take();
    fp.aggressor = std::move(first);
    fp.victim = p.seq();
  } else {
    fp.victim = std::move(first);
  }
  p.expect('/');
  fp.effect = p.digit01();
  p.expect('/');
  const char r = p.take();
  if (r == '-') {
    fp.read_out = -1;
  } else if (r == '0' || r == '1') {
    fp.read_out = r - '0';
  } else {
    throw ParseError("expected 0, 1 or '-' for the read-out field", p.pos - 1);
  }
  p.expect('>');
  p.skip_ws();
  if (p.pos != text.size()) throw ParseError("trailing characters after '>'", p.pos);

  if (fp.two_cell() && !fp.aggressor->ops.empty() && !fp.victim.ops.empty()) {
    throw ConfigError("operations on both aggressor and victim are not supported");
  }
  const bool victim_read =
      !fp.victim.ops.empty() && fp.victim.ops.back().kind == SensOpKind::Read;
  if (fp.read_out >= 0 && !victim_read) {
    throw ConfigError("read-out value requires a read sensitizer on the victim");
  }
  return fp;
}

namespace {

void unparse_seq(std::string& out, const SensitizingSeq& q) {
  out += static_cast<char>('0' + q.initial_state);
  for (const SensOp& op : q.ops) {
    out += op.kind == SensOpKind::Write ? 'w' : 'r';
    out += static_cast<char>('0' + op.value);
  }
}

}  // namespace

std::string unparse_fp(const FaultPrimitive& p) {
  std::string out = "<";
  if (p.aggressor) {
    unparse_seq(out, *p.aggressor);
    out += ';';
  }
  unparse_seq(out, p.victim);
  out += '/';
  out += static_cast<char>('0' + p.effect);
  out += '/';
  out += p.read_out < 0 ? '-' : static_cast<char>('0' + p.read_out);
  out += '>';
  return out;
}

const std::vector<CatalogEntry>& default_catalog() {
  static const std::vector<CatalogEntry> catalog = [] {
    // clang-format off
    const std::pair<const char*, const char*> table[] = {
        // single-cell static faults (digit = stuck value for SF,
        // operation value for the rest)
        {"SF0",   "<1/0/->"},  {"SF1",   "<0/1/->"},
        {"TF0",   "<1w0/1/->"}, {"TF1",   "<0w1/0/->"},
        {"WDF0",  "<0w0/1/->"}, {"WDF1",  "<1w1/0/->"},
        {"RDF0",  "<0r0/1/1>"}, {"RDF1",  "<1r1/0/0>"},
        {"DRDF0", "<0r0/1/0>"}, {"DRDF1", "<1r1/0/1>"},
        {"IRF0",  "<0r0/0/1>"}, {"IRF1",  "<1r1/1/0>"},
        // two-cell coupling faults
        {"CFst00", "<0;0/1/->"}, {"CFst01", "<0;1/0/->"},
        {"CFst10", "<1;0/1/->"}, {"CFst11", "<1;1/0/->"},
        {"CFds_0w1_0", "<0w1;0/1/->"}, {"CFds_0w1_1", "<0w1;1/0/->"},
        {"CFds_1w0_0", "<1w0;0/1/->"}, {"CFds_1w0_1", "<1w0;1/0/->"},
        {"CFds_0r0_0", "<0r0;0/1/->"}, {"CFds_0r0_1", "<0r0;1/0/->"},
        {"CFds_1r1_0", "<1r1;0/1/->"}, {"CFds_1r1_1", "<1r1;1/0/->"},
        {"CFtr_0_0w1", "<0;0w1/0/->"}, {"CFtr_0_1w0", "<0;1w0/1/->"},
        {"CFtr_1_0w1", "<1;0w1/0/->"}, {"CFtr_1_1w0", "<1;1w0/1/->"},
        {"CFwd_0_0w0", "<0;0w0/1/->"}, {"CFwd_0_1w1", "<0;1w1/0/->"},
        {"CFwd_1_0w0", "<1;0w0/1/->"}, {"CFwd_1_1w1", "<1;1w1/0/->"},
        {"CFrd_0_0r0", "<0;0r0/1/1>"}, {"CFrd_0_1r1", "<0;1r1/0/0>"},
        {"CFrd_1_0r0", "<1;0r0/1/1>"}, {"CFrd_1_1r1", "<1;1r1/0/0>"},
        {"CFdrd_0_0r0", "<0;0r0/1/0>"}, {"CFdrd_0_1r1", "<0;1r1/0/1>"},
        {"CFdrd_1_0r0", "<1;0r0/1/0>"}, {"CFdrd_1_1r1", "<1;1r1/0/1>"},
        {"CFir_0_0r0", "<0;0r0/0/1>"}, {"CFir_0_1r1", "<0;1r1/1/0>"},
        {"CFir_1_0r0", "<1;0r0/0/1>"}, {"CFir_1_1r1", "<1;1r1/1/0>"},
    };
    // clang-format on
    std::vector<CatalogEntry> entries;
    entries.reserve(std::size(table));
    for (const auto& [name, text] : table) {
      entries.push_back(CatalogEntry{name, parse_fp(text)});
    }
    return entries;
  }();
  return catalog;
}

std::string family_name(std::string_view name) {
  std::size_t n = 0;
  while (n < name.size() && std::isalpha(static_cast<unsigned char>(name[n]))) ++n;
  return std::string(name.substr(0, n));
}

FaultInstance FaultInstance::make(const CatalogEntry& entry, Address victim_cell, int victim_bit,
                                  std::optional<Address> aggressor_cell,
                                  std::optional<int> aggressor_bit) {
  if (entry.primitive.two_cell() != aggressor_cell.has_value()) {
    throw ConfigError("fault instance arity does not match its primitive: " + entry.name);
  }
  FaultInstance fi;
  fi.primitive = entry.primitive;
  fi.name = entry.name;
  fi.victim_cell = victim_cell;
  fi.victim_bit = victim_bit;
  fi.aggressor_cell = aggressor_cell;
  fi.aggressor_bit = aggressor_cell ? std::optional<int>(aggressor_bit.value_or(0)) : std::nullopt;
  if (fi.aggressor_cell && *fi.aggressor_cell == victim_cell && *fi.aggressor_bit == victim_bit) {
    throw ConfigError("aggressor and victim must be distinct (cell, bit) locations");
  }
  fi.id = fi.name + ":v" + std::to_string(victim_cell) + "." + std::to_string(victim_bit);
  if (fi.aggressor_cell) {
    fi.id += ":a" + std::to_string(*fi.aggressor_cell) + "." + std::to_string(*fi.aggressor_bit);
  }
  return fi;
}

PlacementMode placement_mode_from_string(std::string_view s) {
  if (s == "single") return PlacementMode::Single;
  if (s == "pairs") return PlacementMode::Pairs;
  if (s == "adjacent-pairs") return PlacementMode::AdjacentPairs;
  throw ConfigError("unknown placement mode: " + std::string(s));
}

std::vector<FaultInstance> enumerate_instances(const std::vector<CatalogEntry>& catalog,
                                               const MemorySpec& spec, PlacementMode mode) {
  spec.validate();
  std::vector<FaultInstance> out;
  const int bits = spec.word_bits;
  for (const CatalogEntry& entry : catalog) {
    if (!entry.primitive.two_cell()) {
      for (Address c = 0; c < spec.n_cells; ++c) {
        for (int b = 0; b < bits; ++b) out.push_back(FaultInstance::make(entry, c, b));
      }
      continue;
    }
    switch (mode) {
      case PlacementMode::Single:
        break;  // two-cell primitives are not placed
      case PlacementMode::Pairs:
        for (Address vc = 0; vc < spec.n_cells; ++vc) {
          for (int vb = 0; vb < bits; ++vb) {
            for (Address ac = 0; ac < spec.n_cells; ++ac) {
              for (int ab = 0; ab < bits; ++ab) {
                if (ac == vc && ab == vb) continue;
                out.push_back(FaultInstance::make(entry, vc, vb, ac, ab));
              }
            }
          }
        }
        break;
      case PlacementMode::AdjacentPairs:
        for (Address vc = 0; vc < spec.n_cells; ++vc) {
          for (int vb = 0; vb < bits; ++vb) {
            if (vc > 0) out.push_back(FaultInstance::make(entry, vc, vb, vc - 1, vb));
            if (vc + 1 < spec.n_cells) out.push_back(FaultInstance::make(entry, vc, vb, vc + 1, vb));
          }
        }
        break;
    }
  }
  return out;
}

namespace {

std::vector<long> parse_int_args(const std::string& args, std::size_t lineno) {
  std::vector<long> vals;
  std::string cur;
  std::stringstream ss(args);
  while (std::getline(ss, cur, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stol(cur, &used));
      while (used < cur.size() && std::isspace(static_cast<unsigned char>(cur[used]))) ++used;
      if (used != cur.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError("bad integer in binding directive", lineno, true);
    }
  }
  return vals;
}

void check_location(const MemorySpec& spec, long cell, long bit, std::size_t lineno) {
  if (cell < 0 || static_cast<Address>(cell) >= spec.n_cells) {
    throw ParseError("binding cell out of range", lineno, true);
  }
  if (bit < 0 || bit >= spec.word_bits) {
    throw ParseError("binding bit out of range", lineno, true);
  }
}

}  // namespace

std::vector<FaultListLine> parse_fault_list(std::istream& in, const MemorySpec& spec) {
  std::vector<FaultListLine> lines;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::size_t a = raw.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    std::size_t z = raw.find_last_not_of(" \t\r");
    std::string body = raw.substr(a, z - a + 1);

    std::string directive;
    const std::size_t at = body.find('@');
    if (at != std::string::npos) {
      directive = body.substr(at + 1);
      body = body.substr(0, at);
      const std::size_t bz = body.find_last_not_of(" \t");
      body = bz == std::string::npos ? std::string() : body.substr(0, bz + 1);
    }

    FaultListLine line;
    try {
      line.entry.primitive = parse_fp(body);
    } catch (const Error& e) {
      throw ParseError(std::string("fault list: ") + e.what(), lineno, true);
    }
    const std::string canonical = unparse_fp(line.entry.primitive);
    line.entry.name = "fp" + std::to_string(lineno);
    for (const CatalogEntry& known : default_catalog()) {
      if (unparse_fp(known.primitive) == canonical) {
        line.entry.name = known.name;
        break;
      }
    }

    if (!directive.empty()) {
      const std::size_t open = directive.find('(');
      const std::size_t close = directive.rfind(')');
      if (open == std::string::npos || close == std::string::npos || close < open) {
        throw ParseError("malformed binding directive", lineno, true);
      }
      const std::string kind = directive.substr(0, open);
      const std::vector<long> args = parse_int_args(directive.substr(open + 1, close - open - 1), lineno);
      if (kind == "cell") {
        if (line.entry.primitive.two_cell()) {
          throw ParseError("@cell binding on a two-cell primitive", lineno, true);
        }
        if (args.size() != 1 && args.size() != 2) {
          throw ParseError("@cell expects (cell[,bit])", lineno, true);
        }
        const long bit = args.size() == 2 ? args[1] : 0;
        check_location(spec, args[0], bit, lineno);
        line.bound = FaultInstance::make(line.entry, static_cast<Address>(args[0]),
                                         static_cast<int>(bit));
      } else if (kind == "pair") {
        if (!line.entry.primitive.two_cell()) {
          throw ParseError("@pair binding on a single-cell primitive", lineno, true);
        }
        if (args.size() != 2 && args.size() != 4) {
          throw ParseError("@pair expects (aggressor,victim[,abit,vbit])", lineno, true);
        }
        const long abit = args.size() == 4 ? args[2] : 0;
        const long vbit = args.size() == 4 ? args[3] : 0;
        check_location(spec, args[0], abit, lineno);
        check_location(spec, args[1], vbit, lineno);
        line.bound = FaultInstance::make(line.entry, static_cast<Address>(args[1]),
                                         static_cast<int>(vbit), static_cast<Address>(args[0]),
                                         static_cast<int>(abit));
      } else {
        throw ParseError("unknown binding directive @" + kind, lineno, true);
      }
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<FaultListLine> load_fault_list(const std::string& path, const MemorySpec& spec) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open fault list: " + path);
  return parse_fault_list(in, spec);
}

std::vector<FaultInstance> instances_from_fault_list(const std::vector<FaultListLine>& lines,
                                                     const MemorySpec& spec, PlacementMode mode) {
  std::vector<FaultInstance> out;
  for (const FaultListLine& line : lines) {
    if (line.bound) {
      out.push_back(*line.bound);
    } else {
      std::vector<CatalogEntry> one{line.entry};
      auto placed = enumerate_instances(one, spec, mode);
      out.insert(out.end(), placed.begin(), placed.end());
    }
  }
  return out;
}

FaultyMemory::FaultyMemory(MemoryState& mem, std::vector<FaultInstance> instances)
    : mem_(&mem), instances_(std::move(instances)), progress_(instances_.size(), 0) {
  const MemorySpec& sp = mem_->spec();
  for (const FaultInstance& fi : instances_) {
    if (fi.victim_cell >= sp.n_cells || fi.victim_bit < 0 || fi.victim_bit >= sp.word_bits) {
      throw ConfigError("fault instance victim location out of range: " + fi.id);
    }
    if (fi.primitive.two_cell() != fi.aggressor_cell.has_value()) {
      throw ConfigError("fault instance arity mismatch: " + fi.id);
    }
    if (fi.aggressor_cell &&
        (*fi.aggressor_cell >= sp.n_cells || *fi.aggressor_bit < 0 ||
         *fi.aggressor_bit >= sp.word_bits)) {
      throw ConfigError("fault instance aggressor location out of range: " + fi.id);
    }
  }
}

void FaultyMemory::reset_dynamic_state() {
  std::fill(progress_.begin(), progress_.end(), 0);
}

Word FaultyMemory::read(Address addr) { return access(AccessOp::Read, addr, 0); }

void FaultyMemory::write(Address addr, Word value) { access(AccessOp::Write, addr, value); }

Word FaultyMemory::access(AccessOp op, Address addr, Word wval) {
  const Word pre = mem_->peek(addr);  // also validates the address
  if (op == AccessOp::Write && wval > mem_->spec().word_mask()) {
    throw ConfigError("value " + std::to_string(wval) + " exceeds word width");
  }

  // Pass 1: advance sensitization automata of operation-bearing instances
  // that target this address; conditions see the pre-access state.
  std::vector<std::size_t> fired;
  for (std::size_t i = 0; i < instances_.size(); ++i) {
    const FaultInstance& fi = instances_[i];
    const FaultPrimitive& p = fi.primitive;
    const SensitizingSeq* seq = p.op_side();
    if (seq == nullptr) continue;
    const bool on_victim = p.op_side_is_victim();
    const Address ocell = on_victim ? fi.victim_cell : *fi.aggressor_cell;
    if (ocell != addr) continue;
    const int obit = on_victim ? fi.victim_bit : *fi.aggressor_bit;
    const int oldb = (pre >> obit) & 1;
    const int newb = op == AccessOp::Write ? ((wval >> obit) & 1) : oldb;

    auto matches = [&](std::size_t step) {
      const SensOp& want = seq->ops[step];
      if (oldb != seq->state_before(step)) return false;
      if (want.kind == SensOpKind::Write) {
        return op == AccessOp::Write && newb == want.value;
      }
      return op == AccessOp::Read && oldb == want.value;
    };

    std::uint8_t step = progress_[i];
    if (!matches(step)) {
      // restart: the access may still begin a fresh sensitizing sequence
      step = 0;
      if (progress_[i] == 0 || !matches(step)) {
        progress_[i] = 0;
        continue;
      }
    }
    ++step;
    if (step < seq->ops.size()) {
      progress_[i] = step;
      continue;
    }
    progress_[i] = 0;
    // The other side of a two-cell primitive is a bare state precondition,
    // checked against the pre-access contents.
    bool cond = true;
    if (p.two_cell()) {
      const SensitizingSeq& other = on_victim ? *p.aggressor : p.victim;
      const Address c2 = on_victim ? *fi.aggressor_cell : fi.victim_cell;
      const int b2 = on_victim ? *fi.aggressor_bit : fi.victim_bit;
      const Word w2 = c2 == addr ? pre : mem_->peek(c2);
      cond = ((w2 >> b2) & 1) == other.initial_state;
    }
    if (cond) fired.push_back(i);
  }

  // Base access.
  if (op == AccessOp::Write) mem_->poke(addr, wval);
  Word ret = op == AccessOp::Read ? pre : wval;

  std::string note;
  auto annotate = [&note](const std::string& id) {
    if (!note.empty()) note += ' ';
    note += id;
  };

  // Pass 2: apply effects of fired instances, in instance order.
  for (std::size_t i : fired) {
    const FaultInstance& fi = instances_[i];
    const FaultPrimitive& p = fi.primitive;
    Word v = mem_->peek(fi.victim_cell);
    v = static_cast<Word>((v & ~(1u << fi.victim_bit)) |
                          (static_cast<unsigned>(p.effect) << fi.victim_bit));
    mem_->poke(fi.victim_cell, v);
    if (op == AccessOp::Read && p.op_side_is_victim()) {
      const int out = p.read_out >= 0 ? p.read_out : p.effect;
      ret = static_cast<Word>((ret & ~(1u << fi.victim_bit)) |
                              (static_cast<unsigned>(out) << fi.victim_bit));
    }
    annotate(fi.id);
  }

  // Pass 3: state faults (bare-state sensitizers) hold invariantly; enforce
  // them after every access.
  for (const FaultInstance& fi : instances_) {
    const FaultPrimitive& p = fi.primitive;
    if (p.op_side() != nullptr) continue;
    if (p.two_cell()) {
      const Word aw = mem_->peek(*fi.aggressor_cell);
      if (((aw >> *fi.aggressor_bit) & 1) != p.aggressor->initial_state) continue;
    }
    const Word vw = mem_->peek(fi.victim_cell);
    if (((vw >> fi.victim_bit) & 1) != p.victim.initial_state) continue;
    if (p.effect == p.victim.initial_state) continue;
    mem_->poke(fi.victim_cell,
               static_cast<Word>((vw & ~(1u << fi.victim_bit)) |
                                 (static_cast<unsigned>(p.effect) << fi.victim_bit)));
    annotate(fi.id);
  }

  mem_->record(op, addr, op == AccessOp::Read ? ret : wval, std::move(note));
  return ret;
}

}  // namespace pirt
