#include "pirt/galois.hpp"

namespace pirt {

namespace {

int degree64(std::uint64_t v) {
  if (v == 0) return Poly2::kZeroDegree;
  return 63 - __builtin_clzll(v);
}

std::uint64_t clmul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t acc = 0;
  while (b) {
    if (b & 1) acc ^= a;
    a <<= 1;
    b >>= 1;
  }
  return acc;
}

std::uint64_t reduce(std::uint64_t v, std::uint32_t modulus, int dm) {
  int d = degree64(v);
  while (d >= dm) {
    v ^= static_cast<std::uint64_t>(modulus) << (d - dm);
    d = degree64(v);
  }
  return v;
}

}  // namespace

Poly2 poly2_mul_mod(Poly2 a, Poly2 b, Poly2 modulus) {
  const int dm = modulus.degree();
  if (modulus.is_zero() || dm < 1) {
    throw ConfigError("invalid modulus: degree must be at least 1");
  }
  const std::uint64_t prod = clmul(a.bits, b.bits);
  return Poly2(static_cast<std::uint32_t>(reduce(prod, modulus.bits, dm)));
}

bool is_irreducible(Poly2 p) {
  const int d = p.degree();
  if (d < 1) {
    throw ConfigError("irreducibility is undefined for constant polynomials");
  }
  if (d == 1) return true;
  if ((p.bits & 1) == 0) return false;  // divisible by x
  for (int dd = 1; dd <= d / 2; ++dd) {
    for (std::uint32_t q = 1u << dd; q < (2u << dd); ++q) {
      if (reduce(p.bits, q, dd) == 0) return false;
    }
  }
  return true;
}

bool is_primitive(Poly2 p) {
  const int m = p.degree();
  if (m < 1 || m > 16) {
    throw ConfigError("is_primitive requires 1 <= deg p <= 16");
  }
  if (!is_irreducible(p)) {
    throw ConfigError("is_primitive requires an irreducible polynomial");
  }
  const std::uint32_t group_order = (1u << m) - 1;
  std::uint32_t e = static_cast<std::uint32_t>(reduce(2, p.bits, m));
  for (std::uint32_t t = 1; t <= group_order; ++t) {
    if (e == 1) return t == group_order;
    e = static_cast<std::uint32_t>(reduce(clmul(e, 2), p.bits, m));
  }
  return false;  // x is nilpotent (p = x); no order
}

FieldSpec::FieldSpec(Poly2 p) : p_(p), m_(p.degree()) {
  if (m_ < 1 || m_ > 16) {
    throw ConfigError("field generator polynomial must have degree 1..16");
  }
  if (!is_irreducible(p)) {
    throw ConfigError("field generator polynomial must be irreducible");
  }
}

Word FieldSpec::mul(Word a, Word b) const {
  if (a >= order() || b >= order()) {
    throw ConfigError("field element out of range");
  }
  return static_cast<Word>(poly2_mul_mod(Poly2(a), Poly2(b), p_).bits);
}

FeedbackSpec::FeedbackSpec(FieldSpec field, std::vector<Word> coeffs, Word c0)
    : field_(field), coeffs_(std::move(coeffs)), c0_(c0) {
  if (coeffs_.empty()) {
    throw ConfigError("feedback polynomial needs k >= 1 coefficients");
  }
  if (coeffs_.back() == 0) {
    throw ConfigError("leading feedback coefficient c_k must be nonzero");
  }
  const std::uint32_t order = field_.order();
  if (c0_ >= order) {
    throw ConfigError("feedback constant term out of field range");
  }
  for (Word c : coeffs_) {
    if (c >= order) throw ConfigError("feedback coefficient out of field range");
  }
  if (field_.m() <= 8) {
    mul_table_.resize(coeffs_.size() * order);
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
      for (std::uint32_t a = 0; a < order; ++a) {
        mul_table_[j * order + a] = field_.mul(coeffs_[j], static_cast<Word>(a));
      }
    }
  }
}

Word FeedbackSpec::coeff_mul(int j, Word a) const {
  if (!mul_table_.empty()) {
    return mul_table_[static_cast<std::size_t>(j - 1) * field_.order() + a];
  }
  return field_.mul(coeffs_[static_cast<std::size_t>(j - 1)], a);
}

Word glfsr_next(const FeedbackSpec& fb, std::span<const Word> window) {
  if (static_cast<int>(window.size()) != fb.k()) {
    throw ConfigError("window length must equal register length k");
  }
  const Word max = fb.field().max_element();
  Word acc = 0;
  for (int j = 1; j <= fb.k(); ++j) {
    const Word s = window[static_cast<std::size_t>(j - 1)];
    if (s > max) throw ConfigError("window element out of field range");
    acc ^= fb.coeff_mul(j, s);
  }
  return acc;
}

std::uint64_t sequence_period(const FeedbackSpec& fb, std::span<const Word> seed) {
  if (static_cast<int>(seed.size()) != fb.k()) {
    throw ConfigError("seed length must equal register length k");
  }
  bool all_zero = true;
  for (Word s : seed) {
    if (s != 0) all_zero = false;
  }
  if (all_zero) {
    throw ConfigError("degenerate seed: the all-zero state is a fixed point");
  }
  const std::uint64_t states = 1ull << (static_cast<std::uint64_t>(fb.field().m()) * fb.k());
  if (states > (1ull << 24)) {
    throw ConfigError("state space exceeds 2^24; period search refused");
  }
  std::vector<Word> w(seed.begin(), seed.end());
  for (std::uint64_t t = 1; t <= states; ++t) {
    const Word next = glfsr_next(fb, w);
    for (std::size_t j = 0; j + 1 < w.size(); ++j) w[j] = w[j + 1];
    w.back() = next;
    if (std::equal(w.begin(), w.end(), seed.begin())) return t;
  }
  throw ConsistencyError("sequence did not return to seed within the state bound");
}

FeedbackSpec bit_lfsr(Poly2 p) {
  const int k = p.degree();
  if (k < 1) {
    throw ConfigError("bit register polynomial must have degree >= 1");
  }
  std::vector<Word> coeffs(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) {
    coeffs[static_cast<std::size_t>(j - 1)] = static_cast<Word>((p.bits >> j) & 1u);
  }
  return FeedbackSpec(FieldSpec(Poly2(3)), std::move(coeffs), static_cast<Word>(p.bits & 1u));
}

}  // namespace pirt
