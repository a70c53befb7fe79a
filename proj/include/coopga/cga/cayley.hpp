// Product tables for the null-basis blades, generated at startup from the
// diagonal basis {e+, e-} (e+*e+ = +1, e-*e- = -1) via
//   e0 = (e- - e+)/2,   ei = e- + e+,
// which yields e0|ei = -1. Deriving the null-basis Cayley table mechanically
// from the diagonal one avoids hand-transcribed sign errors; all resulting
// coefficients are small dyadic rationals, exact in double precision.

#pragma once

#include <array>
#include <cassert>
#include <cstdint>
#include <vector>

#include "coopga/cga/blades.hpp"

namespace coopga::cga {

namespace detail {

// A multivector over diagonal-basis blades, sparse (mask, coefficient) form.
// Diagonal generator order: (e1, e2, e3, e+, e-); bit3 = e+, bit4 = e-.
struct DiagTerm {
  std::uint8_t mask;
  double coeff;
};
using DiagExpr = std::vector<DiagTerm>;

inline void diag_add(DiagExpr& expr, std::uint8_t mask, double coeff) {
  for (auto& t : expr) {
    if (t.mask == mask) {
      t.coeff += coeff;
      return;
    }
  }
  if (coeff != 0.0) expr.push_back({mask, coeff});
}

// Reordering sign when multiplying diagonal basis blades a*b: count the
// transpositions needed to move each generator of b past the higher
// generators of a.
inline int reorder_sign(std::uint8_t a, std::uint8_t b) {
  int swaps = 0;
  std::uint8_t rest = static_cast<std::uint8_t>(a >> 1);
  while (rest != 0) {
    swaps += std::popcount(static_cast<unsigned>(rest & b));
    rest = static_cast<std::uint8_t>(rest >> 1);
  }
  return (swaps % 2 == 0) ? 1 : -1;
}

// Geometric product of two diagonal basis blades. Shared generators square
// to their metric (+1 except e-, which is -1).
inline DiagTerm diag_blade_product(std::uint8_t a, std::uint8_t b) {
  double sign = reorder_sign(a, b);
  std::uint8_t shared = static_cast<std::uint8_t>(a & b);
  if (shared & (1u << 4)) sign = -sign;  // e- squares to -1
  return {static_cast<std::uint8_t>(a ^ b), sign};
}

// Outer product of two diagonal basis blades: zero on shared generators.
inline DiagTerm diag_blade_wedge(std::uint8_t a, std::uint8_t b) {
  if ((a & b) != 0) return {0, 0.0};
  return {static_cast<std::uint8_t>(a | b), static_cast<double>(reorder_sign(a, b))};
}

// Expansion of a single null generator into diagonal generators.
inline DiagExpr null_generator_expansion(int g) {
  switch (g) {
    case 0: return {{1u << 0, 1.0}};                       // e1
    case 1: return {{1u << 1, 1.0}};                       // e2
    case 2: return {{1u << 2, 1.0}};                       // e3
    case 3: return {{1u << 4, 0.5}, {1u << 3, -0.5}};      // e0 = (e- - e+)/2
    default: return {{1u << 4, 1.0}, {1u << 3, 1.0}};      // ei = e- + e+
  }
}

// Expansion of a diagonal generator into null generators (the inverse map):
//   e+ = ei/2 - e0,   e- = ei/2 + e0.
inline DiagExpr diag_generator_expansion(int g) {
  switch (g) {
    case 0: return {{kMaskE1, 1.0}};
    case 1: return {{kMaskE2, 1.0}};
    case 2: return {{kMaskE3, 1.0}};
    case 3: return {{kMaskEi, 0.5}, {kMaskE0, -1.0}};
    default: return {{kMaskEi, 0.5}, {kMaskE0, 1.0}};
  }
}

// Wedge together per-generator expansions to express a blade of one basis in
// the other. Used in both directions; the wedge is metric-free so only the
// reordering signs matter.
inline DiagExpr expand_blade(std::uint8_t mask, DiagExpr (*generator)(int)) {
  DiagExpr acc = {{0, 1.0}};
  for (int g = 0; g < kGenerators; ++g) {
    if (!(mask & (1u << g))) continue;
    const DiagExpr factor = generator(g);
    DiagExpr next;
    for (const auto& lhs : acc) {
      for (const auto& rhs : factor) {
        const DiagTerm w = diag_blade_wedge(lhs.mask, rhs.mask);
        if (w.coeff != 0.0) diag_add(next, w.mask, lhs.coeff * rhs.coeff * w.coeff);
      }
    }
    acc = std::move(next);
  }
  return acc;
}

}  // namespace detail

// One output term of a basis-blade product.
struct ProductTerm {
  std::uint8_t slot;
  double coeff;
};

// Precomputed product tables over the 32 null-basis blades, slot-indexed.
// Read-only after construction; access through CayleyTable::instance().
class CayleyTable {
 public:
  static const CayleyTable& instance() {
    static const CayleyTable table;
    return table;
  }

  // Terms of the geometric product of basis blades a*b (slot indices).
  const std::vector<ProductTerm>& geometric(int a, int b) const { return geometric_[a][b]; }
  // Outer product (grade g(a)+g(b) part), inner product (grade |g(a)-g(b)|
  // part) and commutator (ab - ba)/2 of basis blades.
  const std::vector<ProductTerm>& outer(int a, int b) const { return outer_[a][b]; }
  const std::vector<ProductTerm>& inner(int a, int b) const { return inner_[a][b]; }
  const std::vector<ProductTerm>& commutator(int a, int b) const { return commutator_[a][b]; }

  // Slots the commutator of a grade-r with a grade-s homogeneous multivector
  // can structurally populate.
  std::uint32_t commutator_slot_mask(int grade_a, int grade_b) const {
    return commutator_grades_[grade_a][grade_b];
  }

  CayleyTable(const CayleyTable&) = delete;
  CayleyTable& operator=(const CayleyTable&) = delete;

 private:
  using Table = std::array<std::array<std::vector<ProductTerm>, kBladeCount>, kBladeCount>;

  CayleyTable() {
    // Null blade -> diagonal expansion, and diagonal blade -> null expansion.
    std::array<detail::DiagExpr, kBladeCount> to_diag;
    std::array<detail::DiagExpr, kBladeCount> to_null;
    for (int m = 0; m < kBladeCount; ++m) {
      to_diag[m] = detail::expand_blade(static_cast<std::uint8_t>(m),
                                        &detail::null_generator_expansion);
      to_null[m] = detail::expand_blade(static_cast<std::uint8_t>(m),
                                        &detail::diag_generator_expansion);
    }

    for (int sa = 0; sa < kBladeCount; ++sa) {
      for (int sb = 0; sb < kBladeCount; ++sb) {
        std::array<double, kBladeCount> acc{};  // null-slot accumulator
        const std::uint8_t ma = mask_of_slot(sa);
        const std::uint8_t mb = mask_of_slot(sb);
        for (const auto& ta : to_diag[ma]) {
          for (const auto& tb : to_diag[mb]) {
            const detail::DiagTerm p = detail::diag_blade_product(ta.mask, tb.mask);
            const double c = ta.coeff * tb.coeff * p.coeff;
            if (c == 0.0) continue;
            for (const auto& back : to_null[p.mask]) {
              acc[slot_of_mask(back.mask)] += c * back.coeff;
            }
          }
        }
        const int ga = slot_grade(sa);
        const int gb = slot_grade(sb);
        for (int out = 0; out < kBladeCount; ++out) {
          if (acc[out] == 0.0) continue;
          geometric_[sa][sb].push_back({static_cast<std::uint8_t>(out), acc[out]});
          const int go = slot_grade(out);
          if (go == ga + gb) outer_[sa][sb].push_back({static_cast<std::uint8_t>(out), acc[out]});
          if (go == (ga > gb ? ga - gb : gb - ga)) {
            inner_[sa][sb].push_back({static_cast<std::uint8_t>(out), acc[out]});
          }
        }
      }
    }

    for (int sa = 0; sa < kBladeCount; ++sa) {
      for (int sb = 0; sb < kBladeCount; ++sb) {
        std::array<double, kBladeCount> acc{};
        for (const auto& t : geometric_[sa][sb]) acc[t.slot] += 0.5 * t.coeff;
        for (const auto& t : geometric_[sb][sa]) acc[t.slot] -= 0.5 * t.coeff;
        for (int out = 0; out < kBladeCount; ++out) {
          if (acc[out] != 0.0) {
            commutator_[sa][sb].push_back({static_cast<std::uint8_t>(out), acc[out]});
            commutator_grades_[slot_grade(sa)][slot_grade(sb)] |= 1u << out;
          }
        }
      }
    }
  }

  Table geometric_;
  Table outer_;
  Table inner_;
  Table commutator_;
  std::array<std::array<std::uint32_t, kGenerators + 1>, kGenerators + 1> commutator_grades_{};
};

}  // namespace coopga::cga
