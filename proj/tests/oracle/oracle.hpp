#pragma once

// Slow, independent reference implementations used only by the tests. None
// of them call into the library's arithmetic beyond plain integer types.

#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;
using i64 = std::int64_t;

u64 mulmod(u64 a, u64 b, u64 p);
u64 powmod(u64 a, u64 e, u64 p);
u64 inv(u64 a, u64 p);

/// Legendre symbol from a table of squares; p must be small.
class SquareTable {
 public:
  explicit SquareTable(u64 p);
  int chi(u64 x) const;

 private:
  u64 p_;
  std::vector<bool> square_;
};

bool is_prime_naive(u64 n);

struct Pt {
  bool inf = true;
  u64 x = 0;
  u64 y = 0;

  friend bool operator==(const Pt&, const Pt&) = default;
};

/// Textbook affine group law on y^2 = x^3 + A x + B.
struct Weierstrass {
  u64 p, A, B;

  bool on_curve(const Pt& P) const;
  Pt add(const Pt& P, const Pt& Q) const;
  Pt mul(u64 n, Pt P) const;
  /// Least r with [r]P = O by repeated addition.
  u64 order(const Pt& P) const;
  /// O followed by every affine point, x then y increasing.
  std::vector<Pt> points() const;
};

using Poly = std::vector<u64>;  // coefficients, lowest degree first, trimmed

Poly poly_mul(const Poly& f, const Poly& g, u64 p);
Poly poly_sub(const Poly& f, const Poly& g, u64 p);
Poly poly_scale(const Poly& f, u64 c, u64 p);
u64 poly_eval(const Poly& f, u64 x, u64 p);

/// g_0 .. g_nmax in F_p[x] with Psi_n = g_n for odd n and y g_n for even n.
std::vector<Poly> division_polys(u64 p, u64 A, u64 B, unsigned nmax);

/// The same polynomials reduced modulo x^p - x; they agree with
/// division_polys at every x in F_p.
std::vector<Poly> division_polys_reduced(u64 p, u64 A, u64 B, unsigned nmax);

/// Psi_0 .. Psi_nmax at (x, y) from the same x-only recurrences evaluated
/// pointwise, with y^2 replaced by x^3 + A x + B. Valid for 2-torsion
/// points as well.
std::vector<u64> psi_pointwise(u64 p, u64 A, u64 B, u64 x, u64 y, unsigned nmax);

/// sum_{n=1}^{R} chi[n-1] e_R(an) in long double, one term at a time.
std::complex<long double> naive_twisted_sum(const std::vector<int>& chi, i64 a);

/// Smallest d >= 1 with s[i] = s[i + d] for every i in range, or s.size().
template <typename T>
std::size_t naive_period(const std::vector<T>& s) {
  for (std::size_t d = 1; d < s.size(); ++d) {
    bool ok = true;
    for (std::size_t i = 0; i + d < s.size() && ok; ++i) ok = s[i] == s[i + d];
    if (ok) return d;
  }
  return s.size();
}

/// Discrete log base g of x modulo p by exhaustive search.
std::optional<u64> naive_log(u64 g, u64 x, u64 p);

}  // namespace oracle
