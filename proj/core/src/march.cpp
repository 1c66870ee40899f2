#include "pirt/march.hpp"

#include <cctype>
#include <map>

namespace pirt {

namespace {

struct MarchParser {
  std::string_view s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool at_end() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  char take() {
    skip_ws();
    if (pos >= s.size()) throw ParseError("unexpected end of march string", pos);
    return s[pos++];
  }
  void expect(char c) {
    const char g = take();
    if (g != c) throw ParseError(std::string("expected '") + c + "'", pos - 1);
  }
  unsigned number() {
    skip_ws();
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) {
      throw ParseError("expected a number", pos);
    }
    unsigned v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      v = v * 10 + static_cast<unsigned>(s[pos] - '0');
      ++pos;
    }
    return v;
  }

  int offset_spec() {  // "[i]" or "[i+3]", '[' already consumed
    expect('i');
    int off = 0;
    if (peek() == '+') {
      take();
      off = static_cast<int>(number());
    }
    expect(']');
    return off;
  }

  std::vector<ExprTerm> expr() {
    std::vector<ExprTerm> terms;
    while (true) {
      ExprTerm term;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        term.coeff = static_cast<Word>(number());
        expect('*');
      }
      expect('r');
      expect('[');
      term.offset = offset_spec();
      terms.push_back(term);
      if (peek() == '^') {
        take();
        continue;
      }
      break;
    }
    return terms;
  }

  MarchOp op() {
    MarchOp o;
    const char c = take();
    if (c == 'r') {
      const char n = take();
      if (n == '0' || n == '1') {
        o.kind = MarchOp::Kind::ReadConst;
        o.value = n - '0';
      } else if (n == 'X') {
        o.kind = MarchOp::Kind::ReadOffset;
        o.offset = 0;
      } else if (n == '[') {
        o.kind = MarchOp::Kind::ReadOffset;
        o.offset = offset_spec();
      } else {
        throw ParseError("expected 0, 1, X or [offset] after 'r'", pos - 1);
      }
    } else if (c == 'w') {
      const char n = take();
      if (n == '0' || n == '1') {
        o.kind = MarchOp::Kind::WriteConst;
        o.value = n - '0';
      } else if (n == '[') {
        o.kind = MarchOp::Kind::WriteExpr;
        o.offset = offset_spec();
        expect('=');
        o.expr = expr();
      } else {
        throw ParseError("expected 0, 1 or [offset] after 'w'", pos - 1);
      }
    } else {
      throw ParseError("expected a read or write operation", pos - 1);
    }
    return o;
  }

  MarchElement element() {
    MarchElement e;
    const char d = take();
    if (d == 'u') {
      e.dir = MarchDir::Up;
    } else if (d == 'd') {
      e.dir = MarchDir::Down;
    } else if (d == 'a') {
      e.dir = MarchDir::Any;
    } else {
      throw ParseError("expected direction u, d or a", pos - 1);
    }
    expect('(');
    e.ops.push_back(op());
    while (peek() == ',') {
      take();
      e.ops.push_back(op());
    }
    expect(')');
    return e;
  }
};

void validate_expr_references(const MarchElement& e, std::size_t element_idx) {
  std::vector<int> read_offsets;
  for (std::size_t i = 0; i < e.ops.size(); ++i) {
    const MarchOp& o = e.ops[i];
    if (o.kind == MarchOp::Kind::ReadConst) read_offsets.push_back(0);
    if (o.kind == MarchOp::Kind::ReadOffset) read_offsets.push_back(o.offset);
    if (o.kind == MarchOp::Kind::WriteExpr) {
      for (const ExprTerm& t : o.expr) {
        bool found = false;
        for (int r : read_offsets) {
          if (r == t.offset) found = true;
        }
        if (!found) {
          throw ConfigError("computed write in element " + std::to_string(element_idx + 1) +
                            " references r[i+" + std::to_string(t.offset) +
                            "] before any such read");
        }
      }
    }
  }
}

}  // namespace

MarchAlgorithm parse_march(std::string_view text) {
  MarchParser p{text};
  MarchAlgorithm alg;
  if (p.at_end()) throw ParseError("empty march string", 0);
  alg.elements.push_back(p.element());
  while (p.peek() == ';') {
    p.take();
    if (p.at_end()) break;  // tolerate a trailing semicolon
    alg.elements.push_back(p.element());
  }
  if (!p.at_end()) throw ParseError("trailing characters after march element", p.pos);
  for (std::size_t i = 0; i < alg.elements.size(); ++i) {
    validate_expr_references(alg.elements[i], i);
  }
  return alg;
}

std::string unparse_march(const MarchAlgorithm& alg) {
  std::string out;
  auto offset_text = [](int off) {
    return off == 0 ? std::string("i") : "i+" + std::to_string(off);
  };
  for (std::size_t i = 0; i < alg.elements.size(); ++i) {
    const MarchElement& e = alg.elements[i];
    if (i) out += "; ";
    out += e.dir == MarchDir::Up ? 'u' : e.dir == MarchDir::Down ? 'd' : 'a';
    out += '(';
    for (std::size_t j = 0; j < e.ops.size(); ++j) {
      if (j) out += ", ";
      const MarchOp& o = e.ops[j];
      switch (o.kind) {
        case MarchOp::Kind::ReadConst:
          out += 'r';
          out += static_cast<char>('0' + o.value);
          break;
        case MarchOp::Kind::ReadOffset:
          out += "r[" + offset_text(o.offset) + "]";
          break;
        case MarchOp::Kind::WriteConst:
          out += 'w';
          out += static_cast<char>('0' + o.value);
          break;
        case MarchOp::Kind::WriteExpr:
          out += "w[" + offset_text(o.offset) + "]=";
          for (std::size_t t = 0; t < o.expr.size(); ++t) {
            if (t) out += '^';
            if (o.expr[t].coeff != 1) out += std::to_string(o.expr[t].coeff) + "*";
            out += "r[" + offset_text(o.expr[t].offset) + "]";
          }
          break;
      }
    }
    out += ')';
  }
  return out;
}

namespace {

Address resolve(MarchDir dir, Address i, int offset, Address n) {
  const Address off = static_cast<Address>(offset) % n;
  if (dir == MarchDir::Down) return (i + n - off) % n;
  return (i + off) % n;
}

struct Captured {
  Word actual;
  Word shadow;
};

Word eval_expr(const std::vector<ExprTerm>& expr, const std::map<int, Captured>& captures,
               const std::optional<FieldSpec>& field, bool shadow_side, Word mask) {
  Word acc = 0;
  for (const ExprTerm& t : expr) {
    const auto it = captures.find(t.offset);
    if (it == captures.end()) {
      throw ConsistencyError("computed write references an offset that was never read");
    }
    Word v = shadow_side ? it->second.shadow : it->second.actual;
    if (t.coeff != 1) {
      if (!field) throw ConfigError("march coefficients need a field; none configured");
      v = field->mul(t.coeff, v);
    }
    acc = static_cast<Word>(acc ^ v);
  }
  return static_cast<Word>(acc & mask);
}

}  // namespace

MarchRun run_march(const MarchAlgorithm& alg, FaultyMemory& mem,
                   std::optional<std::vector<Word>> shadow_init) {
  const MemorySpec& spec = mem.spec();
  const Address n = spec.n_cells;
  const Word mask = spec.word_mask();
  std::vector<Word> shadow = shadow_init ? std::move(*shadow_init) : mem.memory().cells();
  if (shadow.size() != n) throw ConfigError("shadow image size does not match the memory");

  MarchRun run;
  for (std::size_t ei = 0; ei < alg.elements.size(); ++ei) {
    const MarchElement& e = alg.elements[ei];
    const MarchDir dir = e.dir == MarchDir::Any ? MarchDir::Up : e.dir;
    for (Address step = 0; step < n; ++step) {
      const Address i = dir == MarchDir::Down ? n - 1 - step : step;
      std::map<int, Captured> captures;
      for (const MarchOp& o : e.ops) {
        const Address addr = resolve(dir, i, o.offset, n);
        switch (o.kind) {
          case MarchOp::Kind::ReadConst: {
            const Word actual = mem.read(addr);
            const Word expected = o.value ? mask : 0;
            run.reads.push_back({ei, i, addr, expected, actual, actual != expected});
            captures[0] = {actual, shadow[addr]};
            break;
          }
          case MarchOp::Kind::ReadOffset: {
            const Word actual = mem.read(addr);
            const Word expected = shadow[addr];
            run.reads.push_back({ei, i, addr, expected, actual, actual != expected});
            captures[o.offset] = {actual, expected};
            break;
          }
          case MarchOp::Kind::WriteConst: {
            const Word v = o.value ? mask : 0;
            mem.write(addr, v);
            shadow[addr] = v;
            break;
          }
          case MarchOp::Kind::WriteExpr: {
            const Word v = eval_expr(o.expr, captures, alg.field, false, mask);
            const Word sv = eval_expr(o.expr, captures, alg.field, true, mask);
            mem.write(addr, v);
            shadow[addr] = sv;
            break;
          }
        }
      }
    }
  }
  for (const MarchReadLog& r : run.reads) {
    if (r.mismatch) run.detected = true;
  }
  run.final_shadow = std::move(shadow);
  return run;
}

std::vector<MarchDetectionRow> march_detect(const MarchAlgorithm& alg, const MemorySpec& spec,
                                            Word fill, std::span<const FaultInstance> instances) {
  std::vector<MarchDetectionRow> rows;
  rows.reserve(instances.size());
  for (const FaultInstance& fi : instances) {
    MemoryState mem(spec, fill);
    FaultyMemory fm(mem, {fi});
    const MarchRun run = run_march(alg, fm);
    rows.push_back({fi, run.detected});
  }
  return rows;
}

MarchAlgorithm pi_as_march(const IterationConfig& cfg) {
  if (cfg.trajectory.kind == TrajectoryKind::Pseudorandom) {
    throw ConfigError("march notation assumes a monotone address order");
  }
  if (cfg.inversion != InversionMode::None) {
    throw ConfigError("march equivalent is defined for inversion=none only");
  }
  if (!cfg.feedback.is_whole_word()) {
    throw ConfigError("march equivalent is defined for whole-word feedback only");
  }
  const FeedbackSpec& fb = cfg.feedback.whole();
  if (fb.k() > 4) throw ConfigError("march equivalent supports k <= 4");

  MarchElement e;
  e.dir = cfg.trajectory.kind == TrajectoryKind::Up ? MarchDir::Up : MarchDir::Down;
  for (int j = 0; j < fb.k(); ++j) {
    MarchOp r;
    r.kind = MarchOp::Kind::ReadOffset;
    r.offset = j;
    e.ops.push_back(r);
  }
  MarchOp w;
  w.kind = MarchOp::Kind::WriteExpr;
  w.offset = fb.k();
  for (int j = 1; j <= fb.k(); ++j) {
    const Word c = fb.coeffs()[static_cast<std::size_t>(j - 1)];
    if (c == 0) continue;
    w.expr.push_back(ExprTerm{c, j - 1});
  }
  e.ops.push_back(w);

  MarchAlgorithm alg;
  alg.elements.push_back(std::move(e));
  alg.field = fb.field();
  return alg;
}

}  // namespace pirt
