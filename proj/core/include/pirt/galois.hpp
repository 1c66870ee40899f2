#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "pirt/errors.hpp"

namespace pirt {

/// Field elements and memory words share one 16-bit carrier type.
using Word = std::uint16_t;

/// A polynomial over GF(2). Bit i of `bits` is the coefficient of x^i,
/// so 19 = 0b10011 is 1 + x + x^4.
struct Poly2 {
  std::uint32_t bits = 0;

  constexpr Poly2() = default;
  constexpr explicit Poly2(std::uint32_t b) : bits(b) {}

  /// Degree of the zero polynomial (used as a -inf sentinel).
  static constexpr int kZeroDegree = std::numeric_limits<int>::min();

  int degree() const {
    if (bits == 0) return kZeroDegree;
    return 31 - __builtin_clz(bits);
  }
  bool is_zero() const { return bits == 0; }

  friend bool operator==(Poly2 a, Poly2 b) { return a.bits == b.bits; }
  friend bool operator!=(Poly2 a, Poly2 b) { return a.bits != b.bits; }
};

/// Carry-less product of a and b reduced modulo `modulus`.
/// The modulus must have degree >= 1.
Poly2 poly2_mul_mod(Poly2 a, Poly2 b, Poly2 modulus);

/// True iff p has no nontrivial factor over GF(2). Trial division;
/// intended for deg p <= 16.
bool is_irreducible(Poly2 p);

/// True iff the multiplicative order of x modulo p equals 2^deg(p) - 1.
/// Requires p irreducible with 1 <= deg p <= 16.
bool is_primitive(Poly2 p);

/// GF(2^m) defined by an irreducible generator polynomial p(x).
/// Elements are integers 0 .. 2^m-1, bit i = coefficient of x^i.
class FieldSpec {
 public:
  explicit FieldSpec(Poly2 p);

  Poly2 p() const { return p_; }
  int m() const { return m_; }
  std::uint32_t order() const { return 1u << m_; }
  Word max_element() const { return static_cast<Word>(order() - 1); }

  /// Product of two field elements.
  Word mul(Word a, Word b) const;

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) { return a.p_ == b.p_; }

 private:
  Poly2 p_;
  int m_;
};

inline Word field_mul(const FieldSpec& f, Word a, Word b) {
  return f.mul(a, b);
}

/// Feedback polynomial q(z) = c0 + c1 z + ... + ck z^k with coefficients in
/// GF(2^m). The recurrence uses c1..ck only; c0 is kept for display.
class FeedbackSpec {
 public:
  FeedbackSpec(FieldSpec field, std::vector<Word> coeffs, Word c0 = 1);

  const FieldSpec& field() const { return field_; }
  const std::vector<Word>& coeffs() const { return coeffs_; }
  int k() const { return static_cast<int>(coeffs_.size()); }
  Word c0() const { return c0_; }

  /// c_j * a in the field, j in 1..k (table-accelerated for small fields).
  Word coeff_mul(int j, Word a) const;

 private:
  FieldSpec field_;
  std::vector<Word> coeffs_;
  Word c0_;
  std::vector<Word> mul_table_;  // k * 2^m entries when m <= 8
};

/// Next value of the register recurrence: xor of c_j * window[j-1], j = 1..k.
Word glfsr_next(const FeedbackSpec& fb, std::span<const Word> window);

/// Smallest t > 0 after which the sliding window returns to the seed.
/// Requires a nonzero seed and a state space (2^m)^k <= 2^24.
std::uint64_t sequence_period(const FeedbackSpec& fb, std::span<const Word> seed);

/// Classic bit-oriented LFSR read off a binary polynomial: GF(2) register of
/// length deg(p) with tap c_j = coefficient of x^j. bit_lfsr(x^4+x+1) is the
/// familiar maximal 4-bit register.
FeedbackSpec bit_lfsr(Poly2 p);

}  // namespace pirt
