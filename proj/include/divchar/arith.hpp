#pragma once

// Word-size integer number theory: modular arithmetic, primality,
// factorization, and the seeded generator used by every experiment.

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace divchar {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  if (((a | b) >> 32) == 0) return a * b % m;
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 pow_mod(u64 base, u64 exp, u64 m);

/// Deterministic Miller-Rabin; exact for every 64-bit input.
bool is_prime(u64 n);

/// Smallest prime >= n.
u64 next_prime(u64 n);

/// Largest prime <= n, or 0 if there is none.
u64 prev_prime(u64 n);

struct PrimePower {
  u64 prime;
  unsigned exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization, ascending by prime. factorize(1) is empty.
/// Trial division for small factors, Pollard-Brent for the rest.
std::vector<PrimePower> factorize(u64 n);

/// All positive divisors in ascending order.
std::vector<u64> divisors(u64 n);

u64 isqrt(u64 n);

u64 gcd(u64 a, u64 b);

/// lcm(a, b); assumes the result fits in 64 bits.
u64 lcm(u64 a, u64 b);

/// Multiplicative order of x modulo prime p, given the factorization of p - 1.
u64 multiplicative_order(u64 x, u64 p, const std::vector<PrimePower>& pm1_factors);

/// SplitMix64 (Steele, Lea, Flood). The exact recurrence is part of the
/// reproducibility contract of the harness, so it must not change.
class SplitMix64 {
 public:
  using result_type = u64;

  explicit SplitMix64(u64 seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<u64>::max(); }

  result_type operator()() { return next(); }

  u64 next() {
    u64 z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound) by rejection of the biased top range.
  u64 uniform(u64 bound);

  /// Uniform in [lo, hi].
  u64 uniform(u64 lo, u64 hi) { return lo + uniform(hi - lo + 1); }

 private:
  u64 state_;
};

}  // namespace divchar
