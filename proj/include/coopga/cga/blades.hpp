// Basis blade bookkeeping for the conformal algebra of 3D space.
//
// Generators are ordered (e1, e2, e3, e0, ei) where e0 is the null origin
// and ei the null infinity (e0*e0 = ei*ei = 0, e0|ei = -1). A blade is a
// 5-bit mask over that generator order; storage slots sort blades by grade,
// lexicographic within grade, so coefficient vectors serialize unambiguously.

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <string>

namespace coopga::cga {

inline constexpr int kGenerators = 5;
inline constexpr int kBladeCount = 32;

// Generator bit assignments within a blade mask.
inline constexpr std::uint8_t kMaskE1 = 1u << 0;
inline constexpr std::uint8_t kMaskE2 = 1u << 1;
inline constexpr std::uint8_t kMaskE3 = 1u << 2;
inline constexpr std::uint8_t kMaskE0 = 1u << 3;
inline constexpr std::uint8_t kMaskEi = 1u << 4;

constexpr int blade_grade(std::uint8_t mask) { return std::popcount(mask); }

namespace detail {

// Lexicographic comparison of the ascending generator-index tuples of two
// equal-grade masks: strip lowest set bits until they differ.
constexpr bool lex_before(std::uint8_t a, std::uint8_t b) {
  while (a != 0 && b != 0) {
    const int la = std::countr_zero(a);
    const int lb = std::countr_zero(b);
    if (la != lb) return la < lb;
    a = static_cast<std::uint8_t>(a & (a - 1));
    b = static_cast<std::uint8_t>(b & (b - 1));
  }
  return a == 0 && b != 0;
}

constexpr std::array<std::uint8_t, kBladeCount> make_slot_masks() {
  std::array<std::uint8_t, kBladeCount> masks{};
  int next = 0;
  for (int grade = 0; grade <= kGenerators; ++grade) {
    // Selection sort within the grade keeps this constexpr-friendly.
    std::array<std::uint8_t, kBladeCount> of_grade{};
    int count = 0;
    for (int m = 0; m < kBladeCount; ++m) {
      if (blade_grade(static_cast<std::uint8_t>(m)) == grade) {
        of_grade[count++] = static_cast<std::uint8_t>(m);
      }
    }
    for (int i = 0; i < count; ++i) {
      int best = i;
      for (int j = i + 1; j < count; ++j) {
        if (lex_before(of_grade[j], of_grade[best])) best = j;
      }
      const std::uint8_t tmp = of_grade[i];
      of_grade[i] = of_grade[best];
      of_grade[best] = tmp;
      masks[next++] = of_grade[i];
    }
  }
  return masks;
}

constexpr std::array<std::uint8_t, kBladeCount> make_mask_slots(
    const std::array<std::uint8_t, kBladeCount>& slot_masks) {
  std::array<std::uint8_t, kBladeCount> slots{};
  for (int s = 0; s < kBladeCount; ++s) slots[slot_masks[s]] = static_cast<std::uint8_t>(s);
  return slots;
}

}  // namespace detail

// slot -> mask and mask -> slot permutations.
inline constexpr std::array<std::uint8_t, kBladeCount> kSlotMask = detail::make_slot_masks();
inline constexpr std::array<std::uint8_t, kBladeCount> kMaskSlot = detail::make_mask_slots(kSlotMask);

constexpr int slot_of_mask(std::uint8_t mask) { return kMaskSlot[mask]; }
constexpr std::uint8_t mask_of_slot(int slot) { return kSlotMask[slot]; }
constexpr int slot_grade(int slot) { return blade_grade(kSlotMask[slot]); }

// Named slots for the blades the library manipulates directly.
inline constexpr int kSlotScalar = slot_of_mask(0);
inline constexpr int kSlotE1 = slot_of_mask(kMaskE1);
inline constexpr int kSlotE2 = slot_of_mask(kMaskE2);
inline constexpr int kSlotE3 = slot_of_mask(kMaskE3);
inline constexpr int kSlotE0 = slot_of_mask(kMaskE0);
inline constexpr int kSlotEi = slot_of_mask(kMaskEi);
inline constexpr int kSlotE12 = slot_of_mask(kMaskE1 | kMaskE2);
inline constexpr int kSlotE13 = slot_of_mask(kMaskE1 | kMaskE3);
inline constexpr int kSlotE23 = slot_of_mask(kMaskE2 | kMaskE3);
inline constexpr int kSlotE1i = slot_of_mask(kMaskE1 | kMaskEi);
inline constexpr int kSlotE2i = slot_of_mask(kMaskE2 | kMaskEi);
inline constexpr int kSlotE3i = slot_of_mask(kMaskE3 | kMaskEi);
inline constexpr int kSlotE10 = slot_of_mask(kMaskE1 | kMaskE0);
inline constexpr int kSlotE20 = slot_of_mask(kMaskE2 | kMaskE0);
inline constexpr int kSlotE30 = slot_of_mask(kMaskE3 | kMaskE0);
inline constexpr int kSlotE0i = slot_of_mask(kMaskE0 | kMaskEi);
inline constexpr int kSlotE123 = slot_of_mask(kMaskE1 | kMaskE2 | kMaskE3);
inline constexpr int kSlotE123i = slot_of_mask(kMaskE1 | kMaskE2 | kMaskE3 | kMaskEi);
inline constexpr int kSlotPss = slot_of_mask(0x1f);

// Grade sign of the reverse involution, (-1)^{k(k-1)/2}.
constexpr double reverse_sign(int grade) {
  return (grade % 4 == 2 || grade % 4 == 3) ? -1.0 : 1.0;
}

// Human-readable blade label in slot order ("1", "e1", ..., "e1230i").
// "0" stands for the origin e0, "i" for infinity; see docs/conventions.md.
inline std::string blade_name(int slot) {
  const std::uint8_t mask = mask_of_slot(slot);
  if (mask == 0) return "1";
  static constexpr std::array<char, kGenerators> kDigits = {'1', '2', '3', '0', 'i'};
  std::string name = "e";
  for (int g = 0; g < kGenerators; ++g) {
    if (mask & (1u << g)) name.push_back(kDigits[g]);
  }
  return name;
}

}  // namespace coopga::cga
