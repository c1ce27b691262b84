#pragma once

// Elliptic divisibility sequences: the values Psi_n(P) of the division
// polynomials at a fixed point, with O(log n) random access, a sequential
// generator, and exact checks of the classical identities they satisfy.

#include <optional>
#include <utility>
#include <vector>

#include "divchar/curve.hpp"

namespace divchar {

/// Psi_2, Psi_3, Psi_4 at an affine point from their closed forms.
struct PsiBase {
  Fp psi2;
  Fp psi3;
  Fp psi4;
};

PsiBase psi_base(const Curve& curve, const Point& pt);

/// A point P of order r >= 3 together with the constants
///   a = Psi_{r-1} Psi_2 / Psi_{r-2},   b = -Psi_{r-1}^2 Psi_2 / Psi_{r-2}
/// for which Psi_{sr+k}(P) = a^{ks} b^{s^2} Psi_k(P) for all integers s, k.
/// The often-quoted pair Psi_{r-2} / (Psi_{r-1} Psi_2) and
/// Psi_{r-1}^2 Psi_2 / Psi_{r-2} is 1/a and -b, and does not satisfy the
/// identity in general.
///
/// Immutable after construction; every accessor is safe to call
/// concurrently.
class EdsView {
 public:
  /// Computes ord(P). Throws PointNotOnCurve, or TorsionPoint when P is O or
  /// 2-torsion.
  EdsView(const Curve& curve, const Point& pt);

  /// Uses a known order; throws DomainError unless it is exactly ord(P).
  EdsView(const Curve& curve, const Point& pt, u64 order);

  const Curve& curve() const { return curve_; }
  const Point& point() const { return point_; }
  u64 order() const { return order_; }

  /// R = 2r, a period of chi(Psi_n(P)).
  u64 chi_window() const { return 2 * order_; }

  const Fp& a_const() const { return a_; }
  const Fp& b_const() const { return b_; }
  const PsiBase& base() const { return base_; }

  /// Psi_n(P) for any integer n, with Psi_{-n} = -Psi_n.
  Fp psi(i64 n) const;

 private:
  void init();

  Curve curve_;
  Point point_;
  u64 order_ = 0;
  PsiBase base_;
  Fp inv_psi2_;
  Fp a_;
  Fp b_;
};

/// Psi_n(P), O(log n) field operations.
Fp psi_eval(const EdsView& view, i64 n);

/// Psi_1 .. Psi_count in order (index 0 of the result is Psi_1). Uses the
/// four-term recurrence Psi_{n+2} Psi_{n-2} = Psi_{n+1} Psi_{n-1} Psi_2^2 -
/// Psi_3 Psi_n^2, falling back to psi_eval whenever Psi_{n-2} = 0.
std::vector<Fp> psi_sequence(const EdsView& view, u64 count);

/// Psi_n at an arbitrary point of the curve, including 2-torsion points
/// (where even-index values vanish). Throws DomainError at O unless
/// |n| <= 1, since Psi_n has a pole there.
Fp psi_at(const Curve& curve, const Point& pt, i64 n);

/// Psi_{h+i} Psi_{h-i} Psi_j^2 + Psi_{i+j} Psi_{i-j} Psi_h^2
///   + Psi_{j+h} Psi_{j-h} Psi_i^2. Always zero.
Fp verify_recurrence(const EdsView& view, i64 h, i64 i, i64 j);

/// Psi_{nm}(P) == Psi_n([m]P) Psi_m(P)^{n^2} for n, m >= 1. When [m]P = O
/// the right side is a pole times zero and the check reduces to
/// Psi_{nm}(P) = 0.
bool verify_nm(const EdsView& view, i64 n, i64 m);

std::pair<Fp, Fp> lemma_constants(const EdsView& view);

/// Psi_{sr+k} == a^{ks} b^{s^2} Psi_k for s, k >= 1.
bool verify_parper(const EdsView& view, u64 s, u64 k);

struct ParperMismatch {
  u64 s;
  u64 k;
};

/// Checks every 1 <= s <= s_max, 1 <= k <= k_max against one materialized
/// sequence. Returns the first mismatch, if any.
std::optional<ParperMismatch> verify_parper_range(const EdsView& view, u64 s_max, u64 k_max);

/// Exact period of n -> Psi_n(P): T = r s0 with s0 the least s >= 1 such
/// that a^s = 1 and b^{s^2} = 1.
struct PsiPeriod {
  u64 r = 0;
  u64 s0 = 0;
  unsigned spot_checks = 0;

  u128 T() const { return static_cast<u128>(r) * s0; }
  /// T when it fits in 64 bits.
  std::optional<u64> T64() const;
};

/// Verifies the result at 100 pseudo-random n when T < 2^62; throws
/// DomainError if a spot check fails.
PsiPeriod psi_period(const EdsView& view);

}  // namespace divchar
