#pragma once

// Character sums along an elliptic divisibility sequence:
//   S_P(N) = sum_{n=1}^{N} chi(Psi_n(P))
//   T_P(a) = sum_{n=1}^{R} chi(Psi_n(P)) e_R(an),  R = 2r,  e_K(z) = exp(2 pi i z / K)
// plus the order-d generalization and the growth envelopes they are
// compared against.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "divchar/eds.hpp"

namespace divchar {

/// Largest R accepted by routines that materialize a full period.
inline constexpr u64 kWindowGuard = 100'000'000;

/// A floating-point sum together with a bound on its accumulated rounding
/// error: |computed - exact| <= err_bound.
struct ComplexSum {
  double re = 0.0;
  double im = 0.0;
  double err_bound = 0.0;

  std::complex<double> value() const { return {re, im}; }
  double modulus() const { return std::abs(value()); }
};

/// chi(Psi_n(P)) for n = 1 .. R, its minimal period, and R = 2r.
struct ChiSequence {
  std::vector<std::int8_t> values;
  u64 R = 0;
  u64 period = 0;

  int at(u64 n) const { return values[(n - 1) % R]; }
};

int chi_psi(const EdsView& view, i64 n);

/// chi(Psi_1) .. chi(Psi_count).
std::vector<std::int8_t> chi_values(const EdsView& view, u64 count);

/// One period window. The minimal period is the first divisor of 2r, in
/// increasing order, that the materialized window 1..2R respects; the
/// window is also checked to repeat with period R. Throws GuardExceeded
/// for R > kWindowGuard.
ChiSequence chi_sequence(const EdsView& view);

u64 chi_period(const EdsView& view);

/// S_P(N); N > R is handled through the R-periodicity of chi(Psi_n).
i64 incomplete_sum(const EdsView& view, u64 N);

/// T_P(a) by direct summation.
ComplexSum complete_sum(const EdsView& view, i64 a);

/// sum_{n=1}^{R} chi[n-1] e_R(an) with R = chi.size(). `order`, when
/// non-empty, is a permutation of 0 .. R-1 giving the summation order.
ComplexSum twisted_sum(std::span<const std::int8_t> chi, i64 a, std::span<const u64> order = {});

/// T_P(a) for every a in [0, R) by direct summation against a shared
/// root-of-unity table. O(R^2).
std::vector<ComplexSum> complete_sums_direct(std::span<const std::int8_t> chi);

/// All T_P(a), a in [0, R), by FFT. One error bound covers every entry.
struct Spectrum {
  std::vector<std::complex<double>> values;
  double err_bound = 0.0;
};

Spectrum complete_sums_fft(std::span<const std::int8_t> chi);

/// R^{5/6} q^{1/12} (ln q)^{1/3}.
double complete_envelope(u64 R, u64 q);

/// R^{5/6} q^{1/12} (ln q)^{4/3}.
double incomplete_envelope(u64 R, u64 q);

enum class BoundMode { complete, incomplete };

/// |T_P(a)| or |S_P(N)| divided by its envelope. The implied constants are
/// unknown, so this is reported and never compared against a threshold.
double bound_ratio(const EdsView& view, BoundMode mode, i64 a_or_N);

struct BiasReport {
  u64 plus = 0;
  u64 minus = 0;
  u64 zero = 0;
  double bias = 0.0;  // (plus - minus) / N
};

BiasReport bias_report(const EdsView& view, u64 N);

// Characters of order d | p - 1 ------------------------------------------------

/// ind(Psi_n) mod d for n = 1 .. count, -1 where Psi_n = 0.
std::vector<i64> order_d_indices(const EdsView& view, const OrderDCharacter& chi_d, u64 count);

/// r s_d with s_d the least s >= 1 such that chi_d(a)^s = 1 and
/// chi_d(b)^{s^2} = 1. A period of n -> chi_d(Psi_n(P)); it divides d r.
u64 order_d_period_bound(const EdsView& view, const OrderDCharacter& chi_d);

/// Minimal period of n -> chi_d(Psi_n(P)), by a generic search over a window
/// of twice the period bound.
u64 order_d_observed_period(const EdsView& view, const OrderDCharacter& chi_d);

/// sum_{n=1}^{N} chi_d(Psi_n(P)).
ComplexSum order_d_incomplete_sum(const EdsView& view, const OrderDCharacter& chi_d, u64 N);

/// sum_{n=1}^{dr} chi_d(Psi_n(P)) e_{dr}(an). For d = 2 this is T_P(a).
ComplexSum order_d_complete_sum(const EdsView& view, const OrderDCharacter& chi_d, i64 a);

/// Dispatches to the two sums above; `d` must divide p - 1 and be >= 2.
/// The analytic estimates for d > 2 additionally need the averaging primes
/// to satisfy l = +-1 (mod d); that condition does not affect these sums.
ComplexSum order_d_sums(const EdsView& view, u64 d, BoundMode mode, i64 a_or_N);

/// Minimal period of a finite sequence (prefix-function based).
template <typename T>
std::size_t minimal_period(std::span<const T> seq) {
  const std::size_t n = seq.size();
  if (n == 0) return 0;
  std::vector<std::size_t> pi(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t k = pi[i - 1];
    while (k > 0 && !(seq[i] == seq[k])) k = pi[k - 1];
    if (seq[i] == seq[k]) ++k;
    pi[i] = k;
  }
  return n - pi[n - 1];
}

}  // namespace divchar
