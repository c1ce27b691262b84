#pragma once

// Floating-point helpers shared by the character-sum routines.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "divchar/arith.hpp"

namespace divchar::detail {

inline constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

// Absolute error of one table entry e_R(k): angle rounding plus cos/sin.
inline constexpr double kTermError = 32 * kUnitRoundoff;

// e_R(k) = exp(2 pi i k / R), exact at the quarter turns.
inline std::complex<double> unit_root(u64 k, u64 R) {
  k %= R;
  if (k == 0) return {1.0, 0.0};
  if (2 * k == R) return {-1.0, 0.0};
  if (4 * k == R) return {0.0, 1.0};
  if (4 * k == 3 * R) return {0.0, -1.0};
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(R);
  return {std::cos(angle), std::sin(angle)};
}

// Neumaier-compensated accumulation of one real component.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Bound for `terms` summands of modulus <= 1 whose factors each carry up to
// `factors` table errors, accumulated by CompensatedSum over `count` slots.
inline double summation_error(u64 terms, u64 count, unsigned factors = 1) {
  const double n = static_cast<double>(terms);
  const double c = static_cast<double>(count);
  return n * (factors * kTermError + 4 * kUnitRoundoff) + 4 * c * c * kUnitRoundoff * kUnitRoundoff;
}

}  // namespace divchar::detail
