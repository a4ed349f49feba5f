#pragma once

#include <compare>
#include <cstdlib>
#include <string>

namespace su2 {

/// A half-integer (degree l, or an order m / spin s) stored as twice its value.
struct HalfIndex {
  int doubled = 0;

  constexpr HalfIndex() = default;
  constexpr explicit HalfIndex(int twice) : doubled(twice) {}

  static constexpr HalfIndex from_doubled(int twice) { return HalfIndex(twice); }

  constexpr double value() const { return 0.5 * doubled; }
  constexpr bool is_integer() const { return doubled % 2 == 0; }
  constexpr HalfIndex operator-() const { return HalfIndex(-doubled); }

  friend constexpr auto operator<=>(HalfIndex, HalfIndex) = default;

  std::string str() const;
};

/// l is a valid degree: 2l >= 0.
constexpr bool valid_degree(int two_ell) { return two_ell >= 0; }

/// (l, m) satisfies |m| <= l and l - m integral.
constexpr bool valid_order(int two_ell, int two_m) {
  return two_ell >= 0 && std::abs(two_m) <= two_ell && (two_ell - two_m) % 2 == 0;
}

constexpr bool valid_triple(int two_ell, int two_m, int two_s) {
  return valid_order(two_ell, two_m) && valid_order(two_ell, two_s);
}

/// Position of m in the ascending list -l, -l+1, ..., l (that is, l + m).
constexpr int position(int two_ell, int two_m) { return (two_ell + two_m) / 2; }

/// Inverse of position(): doubled order at a row/column index.
constexpr int order_at(int two_ell, int pos) { return 2 * pos - two_ell; }

/// (-1)^k for an integer k, e.g. parity_sign((two_ell - two_m) / 2).
constexpr int parity_sign(int k) { return (k % 2 == 0) ? 1 : -1; }

/// Throws InvalidIndex unless (l, m, s) is a valid triple.
void require_triple(int two_ell, int two_m, int two_s);
void require_order(int two_ell, int two_m);

}  // namespace su2
