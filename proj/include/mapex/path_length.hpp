#pragma once

#include <compare>
#include <cstdint>
#include <numbers>

namespace mapex {

// Sign of a + b*sqrt(2), computed exactly in integers.
constexpr int sign_of_sqrt2_form(std::int64_t a, std::int64_t b) {
  if (a >= 0 && b >= 0) return (a == 0 && b == 0) ? 0 : 1;
  if (a <= 0 && b <= 0) return -1;
  // Opposite signs: compare a^2 with 2 b^2.
  const std::int64_t lhs = a * a;
  const std::int64_t rhs = 2 * b * b;
  if (lhs == rhs) return 0;  // unreachable for integers, sqrt(2) is irrational
  if (a > 0) return lhs > rhs ? 1 : -1;
  return rhs > lhs ? 1 : -1;
}

// Length of an 8-connected grid path: straight moves cost 1, diagonal moves
// sqrt(2). Kept as two counts so comparisons and ties are exact and the
// double value is the same bits no matter the summation order.
struct PathLength {
  std::int64_t straight = 0;
  std::int64_t diagonal = 0;

  double value() const {
    return static_cast<double>(straight) + static_cast<double>(diagonal) * std::numbers::sqrt2;
  }

  constexpr PathLength operator+(PathLength o) const {
    return {straight + o.straight, diagonal + o.diagonal};
  }
  constexpr PathLength& operator+=(PathLength o) {
    straight += o.straight;
    diagonal += o.diagonal;
    return *this;
  }

  friend constexpr bool operator==(PathLength, PathLength) = default;
  friend constexpr std::strong_ordering operator<=>(PathLength x, PathLength y) {
    const int s = sign_of_sqrt2_form(x.straight - y.straight, x.diagonal - y.diagonal);
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  static constexpr PathLength step(bool diagonal_move) {
    return diagonal_move ? PathLength{0, 1} : PathLength{1, 0};
  }
};

// Compares reward_x / (1 + x) against reward_y / (1 + y) exactly.
constexpr std::strong_ordering compare_utility(std::int64_t reward_x, PathLength x,
                                               std::int64_t reward_y, PathLength y) {
  // r_x (1 + y) - r_y (1 + x), expanded over {1, sqrt(2)}.
  const std::int64_t a = reward_x * (1 + y.straight) - reward_y * (1 + x.straight);
  const std::int64_t b = reward_x * y.diagonal - reward_y * x.diagonal;
  const int s = sign_of_sqrt2_form(a, b);
  return s < 0 ? std::strong_ordering::less
               : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

}  // namespace mapex
