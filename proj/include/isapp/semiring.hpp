#pragma once

#include <array>
#include <cstdint>
#include <ostream>

namespace isapp {

// Dependency scalars, totally ordered Zero < L < A < M.
//   Zero: no dependence
//   L:    linear, coefficient 1
//   A:    affine (a coefficient or additive constant larger than 1)
//   M:    arbitrary polynomial dependence
enum class Val : std::uint8_t { Zero = 0, L = 1, A = 2, M = 3 };

inline constexpr std::array<Val, 4> all_vals = {Val::Zero, Val::L, Val::A,
                                                Val::M};

// Lattice join: max in the total order.
constexpr Val val_union(Val a, Val b) { return a < b ? b : a; }

// Additive combination. Zero is the identity; M absorbs; two nonzero
// non-M values always make A (L + L counts twice, hence coefficient 2).
constexpr Val val_add(Val a, Val b) {
  if (a == Val::Zero) return b;
  if (b == Val::Zero) return a;
  if (a == Val::M || b == Val::M) return Val::M;
  return Val::A;
}

// Multiplicative combination. Zero absorbs; otherwise max (L is the identity).
constexpr Val val_mul(Val a, Val b) {
  if (a == Val::Zero || b == Val::Zero) return Val::Zero;
  return a < b ? b : a;
}

constexpr char val_symbol(Val v) {
  switch (v) {
    case Val::Zero: return '0';
    case Val::L: return 'L';
    case Val::A: return 'A';
    default: return 'M';
  }
}

inline std::ostream& operator<<(std::ostream& os, Val v) {
  return os << val_symbol(v);
}

}  // namespace isapp
