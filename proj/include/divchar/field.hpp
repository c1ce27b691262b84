#pragma once

// Prime-field arithmetic for 3 < p < 2^62, the quadratic character, and
// multiplicative characters of order d | p - 1.

#include <cassert>
#include <complex>
#include <optional>
#include <unordered_map>

#include "divchar/arith.hpp"

namespace divchar {

/// Largest admissible modulus (exclusive). Products of two residues then fit
/// comfortably in a 128-bit intermediate.
inline constexpr u64 kMaxModulus = u64{1} << 62;

/// A residue modulo an odd prime p. Always stored canonically in [0, p).
/// Elements carry their modulus; mixing moduli is a logic error.
class Fp {
 public:
  /// Unbound zero. Only useful as a placeholder before assignment.
  constexpr Fp() = default;

  /// Reduces `v` modulo `p`. `p` must already be a validated modulus; use
  /// PrimeField to construct elements from untrusted input.
  constexpr Fp(u64 v, u64 p) : v_(v % p), p_(p) {}

  static Fp from_signed(i64 v, u64 p) {
    const i64 r = v % static_cast<i64>(p);
    return Fp(static_cast<u64>(r < 0 ? r + static_cast<i64>(p) : r), p);
  }

  constexpr u64 value() const { return v_; }
  constexpr u64 modulus() const { return p_; }
  constexpr bool is_zero() const { return v_ == 0; }

  Fp& operator+=(const Fp& o) {
    assert(p_ == o.p_);
    v_ += o.v_;
    if (v_ >= p_) v_ -= p_;
    return *this;
  }
  Fp& operator-=(const Fp& o) {
    assert(p_ == o.p_);
    v_ = v_ >= o.v_ ? v_ - o.v_ : v_ + p_ - o.v_;
    return *this;
  }
  Fp& operator*=(const Fp& o) {
    assert(p_ == o.p_);
    v_ = mul_mod(v_, o.v_, p_);
    return *this;
  }

  friend Fp operator+(Fp a, const Fp& b) { return a += b; }
  friend Fp operator-(Fp a, const Fp& b) { return a -= b; }
  friend Fp operator*(Fp a, const Fp& b) { return a *= b; }
  Fp operator-() const { return Fp(v_ == 0 ? 0 : p_ - v_, p_); }

  friend bool operator==(const Fp& a, const Fp& b) { return a.v_ == b.v_ && a.p_ == b.p_; }

  /// x^e by square-and-multiply; 0^0 = 1.
  Fp pow(u64 e) const { return Fp(pow_mod(v_, e, p_), p_); }

  /// Multiplicative inverse, or nullopt for zero.
  std::optional<Fp> try_inv() const;

  /// Multiplicative inverse; throws DomainError for zero.
  Fp inv() const;

 private:
  u64 v_ = 0;
  u64 p_ = 0;
};

/// Validated prime-field context. Immutable and freely shareable.
class PrimeField {
 public:
  /// Throws InvalidModulus unless p is prime and 3 < p < 2^62.
  explicit PrimeField(u64 p);

  u64 modulus() const { return p_; }

  Fp operator()(u64 v) const { return Fp(v, p_); }
  Fp from_signed(i64 v) const { return Fp::from_signed(v, p_); }
  Fp zero() const { return Fp(0, p_); }
  Fp one() const { return Fp(1, p_); }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  u64 p_;
};

/// Quadratic character by Euler's criterion: 0 for zero, +1 for a nonzero
/// square, -1 otherwise.
int quadratic_character(const Fp& x);

/// A square root of x when x is a square (Tonelli-Shanks). The root returned
/// is the smaller of the two representatives.
std::optional<Fp> sqrt(const Fp& x);

/// Smallest positive primitive root modulo the prime p.
u64 primitive_root(u64 p);

/// Multiplicative character of order d | p - 1, fixed by the smallest
/// primitive root g:  chi_d(x) = exp(2 pi i ind_g(x) / d), chi_d(0) = 0.
///
/// The index is only needed modulo d, so it is recovered inside the order-d
/// subgroup: x^((p-1)/d) = zeta^j with zeta = g^((p-1)/d), solved by
/// baby-step giant-step over d elements.
class OrderDCharacter {
 public:
  /// Throws DomainError unless d >= 1 and d | p - 1.
  OrderDCharacter(const PrimeField& field, u64 d);

  u64 order() const { return d_; }
  u64 generator() const { return g_; }
  u64 modulus() const { return p_; }

  /// ind_g(x) mod d, or nullopt for x = 0.
  std::optional<u64> index(const Fp& x) const;

  /// e^{2 pi i j / d}, exact at the quarter turns.
  std::complex<double> root(u64 j) const;

  std::complex<double> operator()(const Fp& x) const;

 private:
  u64 p_;
  u64 d_;
  u64 g_;
  u64 cofactor_;       // (p - 1) / d
  u64 baby_count_;     // ceil(sqrt(d))
  u64 giant_step_;     // zeta^{-baby_count}
  std::unordered_map<u64, u64> baby_;  // zeta^j -> j
};

}  // namespace divchar
