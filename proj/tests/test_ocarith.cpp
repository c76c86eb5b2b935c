#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "core/ocarith.hpp"

using namespace ec;

// Reference semantics: a 16-bit pattern w stands for the residue w mod 65535,
// and oc_add must be addition in that ring. The representative of residue 0 is
// 0x0000 only when nothing nonzero ever entered the sum, else 0xFFFF.

TEST_CASE("oc_add identities") {
  CHECK(oc_add(oc_from_int(1), oc_from_int(-1)) == kMinusZero);   // 1 + (-1) = -0
  CHECK(oc_add(OcWord(0x0001), kMinusZero) == OcWord(0x0001));    // 1 + (-0) = 1
  CHECK(oc_add(OcWord(0x7FFF), OcWord(0x0001)) == OcWord(0x8000)); // M + 1 = -M
  CHECK(oc_value(OcWord(0x8000)) == -32767);

  CHECK(oc_add(kPlusZero, kPlusZero) == kPlusZero);
  CHECK(oc_add(kMinusZero, kPlusZero) == kMinusZero);
  CHECK(oc_add(kMinusZero, kMinusZero) == kMinusZero);
}

TEST_CASE("oc_add matches the mod-65535 oracle") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint32_t> word(0, 0xFFFF);
  for (int it = 0; it < 100000; ++it) {
    OcWord a = OcWord(word(rng));
    OcWord b = OcWord(word(rng));
    OcWord s = oc_add(a, b);
    CHECK(std::uint32_t(s) % 65535 == (std::uint32_t(a) + std::uint32_t(b)) % 65535);
    // Representative rule: +0 out only when the inputs added no residue the
    // pattern way, i.e. both were literally 0x0000.
    if (s == kPlusZero) CHECK((a == kPlusZero && b == kPlusZero));
  }
}

TEST_CASE("negation is bitwise NOT and inverts the value") {
  CHECK(oc_negate(kPlusZero) == kMinusZero);
  CHECK(oc_negate(kMinusZero) == kPlusZero);
  for (int v = -32767; v <= 32767; v += 257) {
    OcWord w = oc_from_int(v);
    CHECK(oc_value(oc_negate(w)) == -v);
  }
}

TEST_CASE("oc_from_int / oc_value round-trip the whole range") {
  for (int v = -32767; v <= 32767; ++v) CHECK(oc_value(oc_from_int(v)) == v);
  CHECK(oc_from_int(0) == kPlusZero);  // the canonical zero is +0
  CHECK(oc_from_int(-3) == OcWord(0xFFFC));
  CHECK_THROWS_AS(oc_from_int(32768), std::out_of_range);
  CHECK_THROWS_AS(oc_from_int(-32768), std::out_of_range);
}

TEST_CASE("both zeros are positive for the update rule") {
  CHECK(oc_sign(kPlusZero) == 1);
  CHECK(oc_sign(kMinusZero) == 1);
  CHECK(oc_sign(OcWord(0x0001)) == 1);
  CHECK(oc_sign(OcWord(0xFFFE)) == -1);  // value -1
  CHECK(oc_sign(OcWord(0x8000)) == -1);
}

TEST_CASE("oc_sum equals the pairwise fold, representative rule included") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint32_t> word(0, 0xFFFF);
  std::uniform_int_distribution<std::size_t> len(0, 40);
  for (int it = 0; it < 20000; ++it) {
    std::vector<OcWord> w(len(rng));
    for (auto& x : w) x = OcWord(word(rng));
    OcWord folded = kPlusZero;
    for (OcWord x : w) folded = oc_add(folded, x);
    CHECK(oc_sum(w) == folded);
  }

  CHECK(oc_sum(std::vector<OcWord>{}) == kPlusZero);
  CHECK(oc_sum(std::vector<OcWord>{0x0000, 0x0000}) == kPlusZero);
  CHECK(oc_sum(std::vector<OcWord>{0xFFFF}) == kMinusZero);
  CHECK(oc_sum(std::vector<OcWord>{0xFFFF, 0x0000}) == kMinusZero);
  CHECK(oc_sum(std::vector<OcWord>{0x0001, 0xFFFE}) == kMinusZero);  // residue 0, not all +0
  CHECK(oc_sum(std::vector<OcWord>{0x8000, 0x8000}) == OcWord(0x0001));
}

TEST_CASE("oc_sum is permutation invariant") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<std::uint32_t> word(0, 0xFFFF);
  for (int it = 0; it < 2000; ++it) {
    std::vector<OcWord> w(17);
    for (auto& x : w) x = OcWord(word(rng));
    OcWord before = oc_sum(w);
    std::shuffle(w.begin(), w.end(), rng);
    CHECK(oc_sum(w) == before);
  }
}

TEST_CASE("addition of in-range values is exact integer addition") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> half(-16383, 16383);
  for (int it = 0; it < 100000; ++it) {
    int a = half(rng), b = half(rng);
    CHECK(oc_value(oc_add(oc_from_int(a), oc_from_int(b))) == a + b);
  }
}
