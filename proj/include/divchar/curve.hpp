#pragma once

// Short Weierstrass curves y^2 = x^3 + Ax + B over F_p, the group law in
// affine coordinates, point orders, and the group structure
// E(F_p) ~ Z/M x Z/L with echelonized generators.

#include <functional>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "divchar/field.hpp"

namespace divchar {

/// Largest p accepted by the brute-force enumerators.
inline constexpr u64 kEnumerationGuard = 1'000'000;

/// Below this, the group order is counted directly rather than by
/// baby-step giant-step.
inline constexpr u64 kDirectCountLimit = 10'000;

/// The point at infinity O, or an affine point (x, y).
class Point {
 public:
  Point() = default;
  Point(Fp x, Fp y) : x_(x), y_(y), infinity_(false) {}

  static Point infinity() { return Point(); }

  bool is_infinity() const { return infinity_; }
  const Fp& x() const { return x_; }
  const Fp& y() const { return y_; }

  friend bool operator==(const Point& a, const Point& b) {
    if (a.infinity_ || b.infinity_) return a.infinity_ == b.infinity_;
    return a.x_ == b.x_ && a.y_ == b.y_;
  }

  /// O first, then affine points lexicographically by (x, y).
  friend bool operator<(const Point& a, const Point& b) {
    if (a.infinity_ || b.infinity_) return a.infinity_ && !b.infinity_;
    if (a.x_.value() != b.x_.value()) return a.x_.value() < b.x_.value();
    return a.y_.value() < b.y_.value();
  }

 private:
  Fp x_;
  Fp y_;
  bool infinity_ = true;
};

class Curve {
 public:
  /// Throws InvalidModulus for a bad p and SingularCurve when
  /// 4A^3 + 27B^2 = 0.
  Curve(u64 p, u64 a, u64 b);
  Curve(const PrimeField& field, Fp a, Fp b);

  const PrimeField& field() const { return field_; }
  u64 p() const { return field_.modulus(); }
  const Fp& a() const { return a_; }
  const Fp& b() const { return b_; }

  /// x^3 + Ax + B.
  Fp rhs(const Fp& x) const { return (x * x + a_) * x + b_; }

  bool contains(const Point& pt) const;

  /// Affine point from raw coordinates; throws PointNotOnCurve.
  Point point(u64 x, u64 y) const;

  /// A point with abscissa x (smaller y), if one exists.
  std::optional<Point> lift_x(const Fp& x) const;

  Point negate(const Point& pt) const;
  Point add(const Point& lhs, const Point& rhs) const;
  Point dbl(const Point& pt) const { return add(pt, pt); }

  /// [n]P by double-and-add; negative n uses -P.
  Point scalar_mul(i64 n, const Point& pt) const;
  Point scalar_mul_u(u64 n, const Point& pt) const;

  /// Uniform affine point (uniform x among liftable abscissas, random sign).
  Point random_point(SplitMix64& rng) const;

  /// Some positive multiple of ord(P), found by baby-step giant-step over
  /// the Hasse interval.
  u64 order_multiple(const Point& pt) const;

  /// Least r >= 1 with [r]P = O.
  u64 point_order(const Point& pt) const;

  /// Least r >= 1 with [r]P = O, given any positive multiple of it.
  u64 point_order(const Point& pt, u64 multiple) const;
  u64 point_order(const Point& pt, u64 multiple, const std::vector<PrimePower>& multiple_factors) const;

  /// #E(F_p). Direct character count below kDirectCountLimit, otherwise
  /// Mestre's baby-step giant-step on the curve and its quadratic twist.
  u64 order() const;

  /// y^2 = x^3 + c^2 A x + c^3 B for the smallest nonresidue c.
  Curve quadratic_twist() const;

  /// Calls `visit` on every point in enumeration order: O first, then
  /// affine points by increasing (x, y). Stops early if `visit` returns
  /// false. Throws GuardExceeded for p > kEnumerationGuard.
  void for_each_point(const std::function<bool(const Point&)>& visit) const;

  /// All points including O, in enumeration order.
  std::vector<Point> enumerate_points() const;

  friend bool operator==(const Curve& l, const Curve& r) {
    return l.p() == r.p() && l.a_ == r.a_ && l.b_ == r.b_;
  }

 private:
  PrimeField field_;
  Fp a_;
  Fp b_;
};

/// Random nonsingular curve over F_p: (A, B) drawn uniformly until the
/// discriminant is nonzero.
Curve random_curve(u64 p, SplitMix64& rng);

/// Hasse interval [p + 1 - floor(2 sqrt p), p + 1 + floor(2 sqrt p)].
std::pair<u64, u64> hasse_interval(u64 p);

/// E(F_p) ~ Z/M x Z/L with L | M; every point is m genM + l genL for a
/// unique (m mod M, l mod L).
struct GroupStructure {
  u64 M = 1;
  u64 L = 1;
  Point gen_m;
  Point gen_l;
  u64 total = 1;
};

/// Echelonized generators by enumeration (p <= kEnumerationGuard). genM is
/// the first point in enumeration order of maximal order; genL is the first
/// point of order L whose cyclic subgroup meets <genM> trivially. The
/// result is verified by regenerating all M L points.
GroupStructure group_structure(const Curve& curve);

/// Exponent M of E(F_p) and the first point in enumeration order whose
/// order equals M. Orders are evaluated lazily so cyclic groups stop early.
std::pair<Point, u64> max_order_point(const Curve& curve);

/// Maps every point of E(F_p) to its coordinates (m, l) with respect to a
/// GroupStructure.
class GroupIndex {
 public:
  GroupIndex(const Curve& curve, const GroupStructure& gs);

  const GroupStructure& structure() const { return gs_; }

  /// Points in coordinate order: index = m * L + l.
  const std::vector<Point>& points() const { return points_; }

  /// (m, l) for an element of the group.
  std::pair<u64, u64> coordinates(const Point& pt) const;

  std::size_t index_of(const Point& pt) const;

 private:
  u64 key(const Point& pt) const;

  u64 p_;
  GroupStructure gs_;
  std::vector<Point> points_;
  std::unordered_map<u64, std::size_t> slot_;
};

}  // namespace divchar
