#pragma once

// 16-bit one's-complement arithmetic, the algebra the whole project runs on.
// A word's bit pattern w represents the value (w mod 65535), so there are two
// zeros: +0 = 0x0000 and -0 = 0xFFFF. Negation is bitwise NOT. Addition is the
// classic end-around-carry add; its representative rule falls out naturally:
// the result pattern is +0 only when both inputs are +0, otherwise a zero-valued
// result comes out as -0.

#include <cstdint>
#include <span>
#include <stdexcept>

namespace ec {

using OcWord = std::uint16_t;

inline constexpr OcWord kPlusZero = 0x0000;
inline constexpr OcWord kMinusZero = 0xFFFF;

// End-around-carry addition.
constexpr OcWord oc_add(OcWord a, OcWord b) {
  std::uint32_t s = std::uint32_t(a) + std::uint32_t(b);
  s = (s & 0xFFFFu) + (s >> 16);
  return OcWord(s);
}

constexpr OcWord oc_negate(OcWord a) { return OcWord(~a); }

// Signed value of a pattern, in [-32767, 32767]. 0xFFFF (-0) maps to 0, as does
// 0x0000 (+0): for a high-bit pattern the value is -(~w), and ~0xFFFF == 0.
constexpr int oc_value(OcWord w) {
  return (w & 0x8000u) ? -int(OcWord(~w)) : int(w);
}

// Pattern for a signed value. Nonnegative n maps to the plain binary pattern
// (so 0 -> +0); negative n maps to ~(-n). |n| > 32767 has no representation.
constexpr OcWord oc_from_int(int n) {
  if (n > 32767 || n < -32767)
    throw std::out_of_range("oc_from_int: value out of 16-bit one's-complement range");
  return n >= 0 ? OcWord(n) : OcWord(~OcWord(-n));
}

// Sign predicate used by the neural update rule: both zeros count as positive.
constexpr int oc_sign(OcWord w) { return oc_value(w) >= 0 ? 1 : -1; }

// Fold a sequence with oc_add. Accumulating wide and folding once at the end
// gives the same pattern as a pairwise left fold, including the representative
// rule: the result is +0 exactly when every word is +0 (a positive accumulator
// that is a multiple of 65535 always folds down to 0xFFFF, never to 0x0000).
inline OcWord oc_sum(std::span<const OcWord> words) {
  std::uint64_t acc = 0;
  for (OcWord w : words) acc += w;
  while (acc >> 16) acc = (acc & 0xFFFFu) + (acc >> 16);
  return OcWord(acc);
}

}  // namespace ec
