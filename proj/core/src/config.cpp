#include "pirt/config.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace pirt {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint32_t parse_int_literal(const std::string& text) {
  std::string t = text;
  if (t.empty()) throw ConfigError("empty integer literal");
  try {
    std::size_t used = 0;
    unsigned long v;
    if (t.size() > 2 && t[0] == '0' && (t[1] == 'b' || t[1] == 'B')) {
      v = std::stoul(t.substr(2), &used, 2);
      used += 2;
    } else if (t.size() > 2 && t[0] == '0' && (t[1] == 'x' || t[1] == 'X')) {
      v = std::stoul(t.substr(2), &used, 16);
      used += 2;
    } else {
      v = std::stoul(t, &used, 10);
    }
    if (used != t.size()) throw ConfigError("trailing characters in integer literal: " + text);
    if (v > 0xffffffffull) throw ConfigError("integer literal out of range: " + text);
    return static_cast<std::uint32_t>(v);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("bad integer literal: " + text);
  }
}

namespace {

std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const std::size_t z = s.find_last_not_of(" \t\r");
  return s.substr(a, z - a + 1);
}

std::vector<std::uint32_t> parse_int_list(const std::string& text) {
  std::vector<std::uint32_t> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    vals.push_back(parse_int_literal(trim(item)));
  }
  if (vals.empty()) throw ConfigError("empty list");
  return vals;
}

struct Section {
  std::string name;
  std::size_t line;
  std::map<std::string, std::pair<std::string, std::size_t>> entries;  // key -> (value, line)
};

class SectionReader {
 public:
  explicit SectionReader(Section s) : s_(std::move(s)) {}

  bool has(const std::string& key) const { return s_.entries.count(key) != 0; }

  std::string take(const std::string& key) {
    auto it = s_.entries.find(key);
    if (it == s_.entries.end()) {
      throw ParseError("[" + s_.name + "] is missing required key '" + key + "'", s_.line, true);
    }
    std::string v = it->second.first;
    s_.entries.erase(it);
    return v;
  }

  std::string take_or(const std::string& key, const std::string& fallback) {
    return has(key) ? take(key) : fallback;
  }

  std::size_t line_of(const std::string& key) const {
    auto it = s_.entries.find(key);
    return it == s_.entries.end() ? s_.line : it->second.second;
  }

  void finish() const {
    if (!s_.entries.empty()) {
      const auto& [key, where] = *s_.entries.begin();
      throw ParseError("unknown key '" + key + "' in [" + s_.name + "]", where.second, true);
    }
  }

  std::size_t line() const { return s_.line; }

 private:
  Section s_;
};

IterationConfig build_iteration(SectionReader& r) {
  const std::size_t at = r.line();
  try {
    const Poly2 p(parse_int_literal(r.take("p")));
    const FieldSpec field(p);
    std::vector<std::uint32_t> raw_coeffs = parse_int_list(r.take("q_coeffs"));
    std::vector<Word> coeffs;
    for (std::uint32_t c : raw_coeffs) coeffs.push_back(static_cast<Word>(c));
    FeedbackSpec fb(field, std::move(coeffs));

    IterationConfig cfg{FeedbackNetwork::whole_word(std::move(fb))};
    for (std::uint32_t s : parse_int_list(r.take("seed"))) {
      cfg.seed.push_back(static_cast<Word>(s));
    }

    const std::string traj = r.take_or("trajectory", "up");
    if (traj == "up") {
      cfg.trajectory.kind = TrajectoryKind::Up;
    } else if (traj == "down") {
      cfg.trajectory.kind = TrajectoryKind::Down;
    } else if (traj == "pseudorandom") {
      cfg.trajectory.kind = TrajectoryKind::Pseudorandom;
      cfg.trajectory.addr_poly = Poly2(parse_int_literal(r.take("addr_poly")));
      cfg.trajectory.addr_seed = parse_int_literal(r.take_or("addr_seed", "1"));
    } else {
      throw ConfigError("unknown trajectory: " + traj);
    }
    if (r.has("addr_poly") || r.has("addr_seed")) {
      throw ConfigError("addr_poly/addr_seed are only valid with trajectory = pseudorandom");
    }

    const std::string inv = r.take_or("inversion", "none");
    if (inv == "none") {
      cfg.inversion = InversionMode::None;
    } else if (inv == "input") {
      cfg.inversion = InversionMode::Input;
    } else if (inv == "output") {
      cfg.inversion = InversionMode::Output;
    } else if (inv == "input_output") {
      cfg.inversion = InversionMode::InputOutput;
    } else {
      throw ConfigError("unknown inversion mode: " + inv);
    }

    const std::string scheme = r.take_or("scheme", "ring");
    if (scheme == "ring") {
      cfg.scheme = Scheme::Ring;
    } else if (scheme == "scan") {
      cfg.scheme = Scheme::Scan;
    } else {
      throw ConfigError("unknown scheme: " + scheme);
    }

    if (r.has("misr_poly")) cfg.misr_poly = Poly2(parse_int_literal(r.take("misr_poly")));
    if (r.has("steps")) cfg.steps = parse_int_literal(r.take("steps"));
    if (r.has("refill")) cfg.refill = static_cast<Word>(parse_int_literal(r.take("refill")));

    r.finish();
    return cfg;
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string(e.what()), at, true);
  }
}

MemoryConfig build_memory(SectionReader& r) {
  const std::size_t at = r.line();
  try {
    MemoryConfig mc;
    mc.spec.n_cells = parse_int_literal(r.take("n"));
    mc.spec.word_bits = static_cast<int>(parse_int_literal(r.take_or("word_bits", "1")));
    mc.spec.read_ports = static_cast<int>(parse_int_literal(r.take_or("read_ports", "1")));
    mc.fill = static_cast<Word>(parse_int_literal(r.take_or("fill", "0")));
    mc.spec.validate();
    if (mc.fill > mc.spec.word_mask()) throw ConfigError("fill exceeds word width");
    r.finish();
    return mc;
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string(e.what()), at, true);
  }
}

}  // namespace

RunConfig parse_run_config(std::istream& in) {
  std::string all(std::istreambuf_iterator<char>(in), {});
  RunConfig rc;
  {
    std::ostringstream hex;
    hex << std::hex;
    hex.width(16);
    hex.fill('0');
    hex << fnv1a64(all);
    rc.config_hash = hex.str();
  }

  std::vector<Section> sections;
  std::istringstream stream(all);
  std::string raw;
  std::size_t lineno = 0;
  bool saw_memory = false;
  while (std::getline(stream, raw)) {
    ++lineno;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header", lineno, true);
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name != "memory" && name != "iteration") {
        throw ParseError("unknown section [" + name + "]", lineno, true);
      }
      if (name == "memory") {
        if (saw_memory) throw ParseError("duplicate [memory] section", lineno, true);
        saw_memory = true;
      }
      sections.push_back(Section{name, lineno, {}});
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineno, true);
    if (sections.empty()) throw ParseError("key outside of any section", lineno, true);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ParseError("expected 'key = value'", lineno, true);
    if (!sections.back().entries.emplace(key, std::make_pair(value, lineno)).second) {
      throw ParseError("duplicate key '" + key + "'", lineno, true);
    }
  }

  bool have_memory = false;
  for (const Section& s : sections) {
    SectionReader r(s);
    if (s.name == "memory") {
      have_memory = true;
      rc.memory = build_memory(r);
    } else {
      rc.schedule.iterations.push_back(build_iteration(r));
    }
  }
  if (!have_memory) throw ConfigError("config needs a [memory] section");
  if (rc.schedule.iterations.empty()) {
    throw ConfigError("config needs at least one [iteration] section");
  }
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  return parse_run_config(in);
}

}  // namespace pirt
