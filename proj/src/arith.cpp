#include "divchar/arith.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace divchar {

u64 pow_mod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

namespace {

bool miller_rabin_witness(u64 n, u64 a, u64 d, unsigned s) {
  u64 x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (unsigned i = 1; i < s; ++i) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr u64 kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 q : kSmall) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // The first twelve primes are a deterministic base set below 2^64.
  for (u64 a : kSmall) {
    if (miller_rabin_witness(n, a, d, s)) return false;
  }
  return true;
}

u64 next_prime(u64 n) {
  if (n <= 2) return 2;
  u64 c = n | 1;
  while (!is_prime(c)) c += 2;
  return c;
}

u64 prev_prime(u64 n) {
  if (n < 2) return 0;
  if (n == 2) return 2;
  u64 c = (n % 2 == 0) ? n - 1 : n;
  while (c > 2 && !is_prime(c)) c -= 2;
  return c > 2 ? c : 2;
}

u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

u64 lcm(u64 a, u64 b) {
  if (a == 0 || b == 0) return 0;
  return a / gcd(a, b) * b;
}

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(__builtin_sqrtl(static_cast<long double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

namespace {

// Pollard-Brent; n is odd, composite, and has no small factors.
u64 pollard_brent(u64 n) {
  SplitMix64 rng(n ^ 0x5eed5eedULL);
  for (;;) {
    const u64 c = rng.uniform(1, n - 1);
    u64 y = rng.uniform(0, n - 1);
    const u64 m = 128;
    u64 g = 1, r = 1, q = 1, x = 0, ys = 0;
    auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      while (k < r && g == 1) {
        ys = y;
        const u64 lim = std::min(m, r - k);
        for (u64 i = 0; i < lim; ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = gcd(q, n);
        k += m;
      }
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const u64 d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

std::vector<PrimePower> factorize(u64 n) {
  assert(n != 0);
  std::vector<u64> primes;
  for (u64 q = 2; q < 1000 && q * q <= n; q += (q == 2 ? 1 : 2)) {
    while (n % q == 0) {
      primes.push_back(q);
      n /= q;
    }
  }
  factor_into(n, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<PrimePower> result;
  for (u64 q : primes) {
    if (!result.empty() && result.back().prime == q) {
      ++result.back().exponent;
    } else {
      result.push_back({q, 1});
    }
  }
  return result;
}

std::vector<u64> divisors(u64 n) {
  std::vector<u64> divs{1};
  for (const auto& [q, e] : factorize(n)) {
    const std::size_t base = divs.size();
    u64 qk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      qk *= q;
      for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * qk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

u64 multiplicative_order(u64 x, u64 p, const std::vector<PrimePower>& pm1_factors) {
  assert(x % p != 0);
  u64 order = p - 1;
  for (const auto& [q, e] : pm1_factors) {
    for (unsigned k = 0; k < e && order % q == 0; ++k) {
      if (pow_mod(x, order / q, p) != 1) break;
      order /= q;
    }
  }
  return order;
}

u64 SplitMix64::uniform(u64 bound) {
  assert(bound != 0);
  const u64 limit = max() - (max() % bound);
  u64 v;
  do {
    v = next();
  } while (v >= limit && limit != 0);
  return v % bound;
}

}  // namespace divchar
