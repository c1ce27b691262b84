#include "divchar/curve.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "divchar/error.hpp"

namespace divchar {

namespace {

void check_nonsingular(const Fp& a, const Fp& b) {
  const u64 p = a.modulus();
  const Fp disc = Fp(4, p) * a * a * a + Fp(27, p) * b * b;
  if (disc.is_zero()) {
    throw SingularCurve("4A^3 + 27B^2 = 0 for A = " + std::to_string(a.value()) +
                        ", B = " + std::to_string(b.value()) + " over F_" + std::to_string(p));
  }
}

}  // namespace

Curve::Curve(u64 p, u64 a, u64 b) : field_(p), a_(field_(a)), b_(field_(b)) {
  check_nonsingular(a_, b_);
}

Curve::Curve(const PrimeField& field, Fp a, Fp b) : field_(field), a_(a), b_(b) {
  check_nonsingular(a_, b_);
}

std::pair<u64, u64> hasse_interval(u64 p) {
  const u64 h = isqrt(4 * p);
  return {p + 1 - h, p + 1 + h};
}

bool Curve::contains(const Point& pt) const {
  if (pt.is_infinity()) return true;
  if (pt.x().modulus() != p() || pt.y().modulus() != p()) return false;
  return pt.y() * pt.y() == rhs(pt.x());
}

Point Curve::point(u64 x, u64 y) const {
  if (x >= p() || y >= p()) {
    throw PointNotOnCurve("coordinates must be reduced modulo " + std::to_string(p()));
  }
  Point pt(field_(x), field_(y));
  if (!contains(pt)) {
    throw PointNotOnCurve("(" + std::to_string(x) + ", " + std::to_string(y) +
                          ") does not satisfy y^2 = x^3 + Ax + B");
  }
  return pt;
}

std::optional<Point> Curve::lift_x(const Fp& x) const {
  const auto y = sqrt(rhs(x));
  if (!y) return std::nullopt;
  return Point(x, *y);
}

Point Curve::negate(const Point& pt) const {
  if (pt.is_infinity()) return pt;
  return Point(pt.x(), -pt.y());
}

Point Curve::add(const Point& lhs, const Point& rhs) const {
  if (lhs.is_infinity()) return rhs;
  if (rhs.is_infinity()) return lhs;
  Fp lambda;
  if (lhs.x() == rhs.x()) {
    if ((lhs.y() + rhs.y()).is_zero()) return Point::infinity();
    const Fp x2 = lhs.x() * lhs.x();
    lambda = (x2 + x2 + x2 + a_) * (lhs.y() + lhs.y()).inv();
  } else {
    lambda = (rhs.y() - lhs.y()) * (rhs.x() - lhs.x()).inv();
  }
  const Fp x3 = lambda * lambda - lhs.x() - rhs.x();
  const Fp y3 = lambda * (lhs.x() - x3) - lhs.y();
  return Point(x3, y3);
}

Point Curve::scalar_mul_u(u64 n, const Point& pt) const {
  Point acc = Point::infinity();
  if (n == 0 || pt.is_infinity()) return acc;
  for (int bit = 63 - __builtin_clzll(n); bit >= 0; --bit) {
    acc = dbl(acc);
    if ((n >> bit) & 1) acc = add(acc, pt);
  }
  return acc;
}

Point Curve::scalar_mul(i64 n, const Point& pt) const {
  if (n >= 0) return scalar_mul_u(static_cast<u64>(n), pt);
  return scalar_mul_u(static_cast<u64>(-(n + 1)) + 1, negate(pt));
}

Point Curve::random_point(SplitMix64& rng) const {
  for (;;) {
    const Fp x = field_(rng.uniform(p()));
    const auto y = sqrt(rhs(x));
    if (!y) continue;
    if (y->is_zero()) return Point(x, *y);
    return (rng.next() & 1) ? Point(x, -*y) : Point(x, *y);
  }
}

u64 Curve::order_multiple(const Point& pt) const {
  if (pt.is_infinity()) return 1;
  const auto [lo, hi] = hasse_interval(p());
  const u64 width = hi - lo + 1;
  u64 w = isqrt(width);
  if (w * w < width) ++w;

  // Baby steps: x([j]P) -> j for 1 <= j <= w.
  std::unordered_map<u64, u64> baby;
  baby.reserve(w);
  Point jp = pt;
  for (u64 j = 1; j <= w; ++j) {
    if (jp.is_infinity()) return j;
    baby.emplace(jp.x().value(), j);
    jp = add(jp, pt);
  }

  const Point step = scalar_mul_u(w, pt);
  Point giant = scalar_mul_u(lo, pt);
  for (u64 i = 0; i <= width / w + 1; ++i) {
    const u64 base = lo + i * w;
    if (giant.is_infinity()) return base;
    if (auto it = baby.find(giant.x().value()); it != baby.end()) {
      const u64 j = it->second;
      const Point pj = scalar_mul_u(j, pt);
      // giant = -[j]P gives base + j; giant = [j]P gives base - j.
      u64 m = base + j;
      if (pj.y() == giant.y()) m = base > j ? base - j : 0;
      if (m > 0 && scalar_mul_u(m, pt).is_infinity()) return m;
    }
    giant = add(giant, step);
  }
  throw DomainError("no multiple of the point order found in the Hasse interval");
}

u64 Curve::point_order(const Point& pt, u64 multiple,
                       const std::vector<PrimePower>& multiple_factors) const {
  u64 order = multiple;
  for (const auto& [q, e] : multiple_factors) {
    for (unsigned k = 0; k < e && order % q == 0; ++k) {
      if (!scalar_mul_u(order / q, pt).is_infinity()) break;
      order /= q;
    }
  }
  return order;
}

u64 Curve::point_order(const Point& pt, u64 multiple) const {
  return point_order(pt, multiple, factorize(multiple));
}

u64 Curve::point_order(const Point& pt) const {
  if (pt.is_infinity()) return 1;
  return point_order(pt, order_multiple(pt));
}

Curve Curve::quadratic_twist() const {
  u64 c = 2;
  while (quadratic_character(field_(c)) != -1) ++c;
  const Fp cf = field_(c);
  return Curve(field_, cf * cf * a_, cf * cf * cf * b_);
}

u64 Curve::order() const {
  const u64 q = p();
  if (q < kDirectCountLimit) {
    u64 count = 1;
    for (u64 x = 0; x < q; ++x) count += static_cast<u64>(1 + quadratic_character(rhs(field_(x))));
    return count;
  }

  // #E + #E' = 2p + 2. Intersect the multiples of the exponents seen on
  // both sides with the Hasse interval until one candidate remains.
  const auto [lo, hi] = hasse_interval(q);
  const Curve twist = quadratic_twist();
  SplitMix64 rng(q * 0x9e3779b97f4a7c15ULL ^ a_.value() * 31 ^ b_.value());
  u64 exp_e = 1, exp_t = 1;
  constexpr u64 kMaxCandidates = 4096;
  for (int iter = 0; iter < 256; ++iter) {
    exp_e = lcm(exp_e, point_order(random_point(rng)));
    exp_t = lcm(exp_t, twist.point_order(twist.random_point(rng)));

    std::vector<u64> found;
    if (exp_e >= exp_t) {
      if ((hi - lo) / exp_e > kMaxCandidates) continue;
      for (u64 n = (lo + exp_e - 1) / exp_e * exp_e; n <= hi; n += exp_e) {
        if ((2 * q + 2 - n) % exp_t == 0) found.push_back(n);
      }
    } else {
      const u64 tlo = 2 * q + 2 - hi, thi = 2 * q + 2 - lo;
      if ((thi - tlo) / exp_t > kMaxCandidates) continue;
      for (u64 n = (tlo + exp_t - 1) / exp_t * exp_t; n <= thi; n += exp_t) {
        if ((2 * q + 2 - n) % exp_e == 0) found.push_back(2 * q + 2 - n);
      }
    }
    if (found.size() == 1) return found.front();
  }
  throw DomainError("group order did not resolve over F_" + std::to_string(q));
}

void Curve::for_each_point(const std::function<bool(const Point&)>& visit) const {
  const u64 q = p();
  if (q > kEnumerationGuard) {
    throw GuardExceeded("point enumeration is limited to p <= " + std::to_string(kEnumerationGuard) +
                        "; use random_point / point_order for larger fields");
  }
  if (!visit(Point::infinity())) return;
  for (u64 x = 0; x < q; ++x) {
    const Fp xf = field_(x);
    const Fp r = rhs(xf);
    if (r.is_zero()) {
      if (!visit(Point(xf, r))) return;
      continue;
    }
    if (quadratic_character(r) != 1) continue;
    const Fp y = *sqrt(r);
    if (!visit(Point(xf, y))) return;
    if (!visit(Point(xf, -y))) return;
  }
}

std::vector<Point> Curve::enumerate_points() const {
  std::vector<Point> pts;
  for_each_point([&](const Point& pt) {
    pts.push_back(pt);
    return true;
  });
  return pts;
}

Curve random_curve(u64 p, SplitMix64& rng) {
  const PrimeField field(p);
  for (;;) {
    const Fp a = field(rng.uniform(p));
    const Fp b = field(rng.uniform(p));
    if (!(Fp(4, p) * a * a * a + Fp(27, p) * b * b).is_zero()) return Curve(field, a, b);
  }
}

namespace {

// Largest M compatible with everything known: M | N, lambda | M, and
// L = N / M with L | M and L | p - 1.
u64 largest_feasible_exponent(u64 n, u64 lambda, u64 p, const std::vector<u64>& divs) {
  for (auto it = divs.rbegin(); it != divs.rend(); ++it) {
    const u64 m = *it;
    const u64 l = n / m;
    if (m % lambda == 0 && m % l == 0 && (p - 1) % l == 0) return m;
  }
  return lambda;
}

struct ExponentSearch {
  Point generator;
  u64 exponent = 1;
};

ExponentSearch search_exponent(const Curve& curve, u64 n) {
  const auto factors = factorize(n);
  const auto divs = divisors(n);
  ExponentSearch best;
  u64 lambda = 1;
  u64 ceiling = largest_feasible_exponent(n, lambda, curve.p(), divs);
  curve.for_each_point([&](const Point& pt) {
    if (pt.is_infinity()) return true;
    const u64 o = curve.point_order(pt, n, factors);
    if (o > best.exponent) {
      best.exponent = o;
      best.generator = pt;
    }
    if (lambda % o != 0) {
      lambda = lcm(lambda, o);
      ceiling = largest_feasible_exponent(n, lambda, curve.p(), divs);
    }
    return best.exponent < ceiling;
  });
  return best;
}

}  // namespace

std::pair<Point, u64> max_order_point(const Curve& curve) {
  const auto best = search_exponent(curve, curve.order());
  return {best.generator, best.exponent};
}

GroupStructure group_structure(const Curve& curve) {
  const auto pts = curve.enumerate_points();
  GroupStructure gs;
  gs.total = pts.size();
  const auto best = search_exponent(curve, gs.total);
  gs.M = best.exponent;
  gs.gen_m = best.generator;
  gs.L = gs.total / gs.M;

  if (gs.L > 1) {
    // The L-torsion of <genM> is generated by [M/L]genM.
    const Point torsion_gen = curve.scalar_mul_u(gs.M / gs.L, gs.gen_m);
    std::vector<Point> cyclic_torsion;
    Point acc = Point::infinity();
    for (u64 j = 0; j < gs.L; ++j) {
      cyclic_torsion.push_back(acc);
      acc = curve.add(acc, torsion_gen);
    }
    const auto l_factors = factorize(gs.L);
    bool found = false;
    for (const Point& pt : pts) {
      if (pt.is_infinity() || !curve.scalar_mul_u(gs.L, pt).is_infinity()) continue;
      if (curve.point_order(pt, gs.L, l_factors) != gs.L) continue;
      // <pt> meets <genM> trivially iff its prime-order subgroups avoid it.
      bool independent = true;
      for (const auto& f : l_factors) {
        const Point sub = curve.scalar_mul_u(gs.L / f.prime, pt);
        if (std::find(cyclic_torsion.begin(), cyclic_torsion.end(), sub) != cyclic_torsion.end()) {
          independent = false;
          break;
        }
      }
      if (independent) {
        gs.gen_l = pt;
        found = true;
        break;
      }
    }
    if (!found) throw DomainError("no complementary generator found");
  }

  GroupIndex check(curve, gs);
  if (check.points().size() != gs.total) throw DomainError("echelonized generators do not span E(F_p)");
  return gs;
}

GroupIndex::GroupIndex(const Curve& curve, const GroupStructure& gs) : p_(curve.p()), gs_(gs) {
  points_.reserve(gs.total);
  slot_.reserve(gs.total);
  Point row = Point::infinity();
  for (u64 m = 0; m < gs.M; ++m) {
    Point cur = row;
    for (u64 l = 0; l < gs.L; ++l) {
      if (!slot_.emplace(key(cur), points_.size()).second) {
        throw DomainError("generated points are not distinct");
      }
      points_.push_back(cur);
      cur = curve.add(cur, gs.gen_l);
    }
    row = curve.add(row, gs.gen_m);
  }
}

u64 GroupIndex::key(const Point& pt) const {
  if (pt.is_infinity()) return p_ * p_;
  return pt.x().value() * p_ + pt.y().value();
}

std::size_t GroupIndex::index_of(const Point& pt) const {
  auto it = slot_.find(key(pt));
  if (it == slot_.end()) throw DomainError("point is not in the indexed group");
  return it->second;
}

std::pair<u64, u64> GroupIndex::coordinates(const Point& pt) const {
  const std::size_t i = index_of(pt);
  return {i / gs_.L, i % gs_.L};
}

}  // namespace divchar
