#include "divchar/eds.hpp"

#include <array>
#include <map>
#include <string>

#include "divchar/error.hpp"

namespace divchar {

PsiBase psi_base(const Curve& curve, const Point& pt) {
  const u64 p = curve.p();
  const Fp& x = pt.x();
  const Fp& y = pt.y();
  const Fp& A = curve.a();
  const Fp& B = curve.b();
  const Fp x2 = x * x;
  const Fp x3 = x2 * x;
  const Fp x4 = x2 * x2;
  const Fp A2 = A * A;
  PsiBase base;
  base.psi2 = y + y;
  base.psi3 = Fp(3, p) * x4 + Fp(6, p) * A * x2 + Fp(12, p) * B * x - A2;
  base.psi4 = Fp(4, p) * y *
              (x3 * x3 + Fp(5, p) * A * x4 + Fp(20, p) * B * x3 - Fp(5, p) * A2 * x2 -
               Fp(4, p) * A * B * x - Fp(8, p) * B * B - A2 * A);
  return base;
}

namespace {

// Window of eight consecutive terms Psi_{k-3} .. Psi_{k+4}; one step maps
// it to the window at 2k or 2k + 1 using
//   Psi_{2m+1} = Psi_{m+2} Psi_m^3 - Psi_{m-1} Psi_{m+1}^3
//   Psi_{2m}   = Psi_m (Psi_{m+2} Psi_{m-1}^2 - Psi_{m-2} Psi_{m+1}^2) / Psi_2
Fp eval_window(u64 n, const PsiBase& base, const Fp& inv_psi2) {
  const u64 p = base.psi2.modulus();
  const Fp one(1, p);
  const Fp psi5 = base.psi4 * base.psi2 * base.psi2 * base.psi2 - base.psi3 * base.psi3 * base.psi3;
  switch (n) {
    case 0: return Fp(0, p);
    case 1: return one;
    case 2: return base.psi2;
    case 3: return base.psi3;
    case 4: return base.psi4;
    case 5: return psi5;
    default: break;
  }

  std::array<Fp, 8> w = {-base.psi2, -one, Fp(0, p), one, base.psi2, base.psi3, base.psi4, psi5};
  for (int bit = 62 - __builtin_clzll(n); bit >= 0; --bit) {
    std::array<Fp, 8> sq;
    std::array<Fp, 8> cu;
    for (int i = 0; i < 8; ++i) {
      sq[i] = w[i] * w[i];
      cu[i] = sq[i] * w[i];
    }
    // Offsets: w[i] = Psi_{k + i - 3}.
    auto odd = [&](int m) {  // Psi_{2(k+m)+1}
      return w[m + 5] * cu[m + 3] - w[m + 2] * cu[m + 4];
    };
    auto even = [&](int m) {  // Psi_{2(k+m)}
      return w[m + 3] * (w[m + 5] * sq[m + 2] - w[m + 1] * sq[m + 4]) * inv_psi2;
    };
    std::array<Fp, 9> v = {odd(-2), even(-1), odd(-1), even(0), odd(0),
                           even(1), odd(1), even(2), odd(2)};
    const std::size_t shift = ((n >> bit) & 1) ? 1 : 0;
    for (std::size_t i = 0; i < 8; ++i) w[i] = v[i + shift];
  }
  return w[3];
}

// Odd-index values at a 2-torsion point, where Psi_2 = 0 and every even
// index vanishes. Each doubling formula then keeps a single term.
class TwoTorsionPsi {
 public:
  TwoTorsionPsi(u64 p, Fp psi3) : p_(p) { memo_.emplace(1, Fp(1, p)); memo_.emplace(3, psi3); }

  Fp odd(u64 n) {
    if (auto it = memo_.find(n); it != memo_.end()) return it->second;
    const u64 m = (n - 1) / 2;
    Fp value;
    if (m % 2 == 0) {
      // Psi_m = Psi_{m+2} = 0: Psi_{2m+1} = -Psi_{m-1} Psi_{m+1}^3.
      const Fp hi = odd(m + 1);
      value = -(odd(m - 1) * hi * hi * hi);
    } else {
      // Psi_{m-1} = Psi_{m+1} = 0: Psi_{2m+1} = Psi_{m+2} Psi_m^3.
      const Fp lo = odd(m);
      value = odd(m + 2) * lo * lo * lo;
    }
    memo_.emplace(n, value);
    return value;
  }

 private:
  u64 p_;
  std::map<u64, Fp> memo_;
};

u64 magnitude(i64 n) { return n < 0 ? static_cast<u64>(-(n + 1)) + 1 : static_cast<u64>(n); }

}  // namespace

EdsView::EdsView(const Curve& curve, const Point& pt) : curve_(curve), point_(pt) {
  if (!curve_.contains(pt)) throw PointNotOnCurve("point is not on the curve");
  if (pt.is_infinity()) throw TorsionPoint("the point at infinity has order 1");
  if (pt.y().is_zero()) throw TorsionPoint("point has order 2 (y = 0)");
  order_ = curve_.point_order(pt);
  init();
}

EdsView::EdsView(const Curve& curve, const Point& pt, u64 order) : curve_(curve), point_(pt), order_(order) {
  if (!curve_.contains(pt)) throw PointNotOnCurve("point is not on the curve");
  if (pt.is_infinity()) throw TorsionPoint("the point at infinity has order 1");
  if (pt.y().is_zero()) throw TorsionPoint("point has order 2 (y = 0)");
  if (order == 0 || !curve_.scalar_mul_u(order, pt).is_infinity() || curve_.point_order(pt, order) != order) {
    throw DomainError("supplied order " + std::to_string(order) + " is not the order of the point");
  }
  init();
}

void EdsView::init() {
  base_ = psi_base(curve_, point_);
  inv_psi2_ = base_.psi2.inv();
  const u64 r = order_;
  const Fp rm1 = psi(static_cast<i64>(r - 1));
  const Fp rm2 = psi(static_cast<i64>(r - 2));
  if (rm1.is_zero() || rm2.is_zero()) {
    throw DomainError("Psi_{r-1} or Psi_{r-2} vanished for a point of order " + std::to_string(r));
  }
  // Setting k = -1 and k = -2 in Psi_{r+k} = a^k b Psi_k pins both constants.
  a_ = rm1 * base_.psi2 * rm2.inv();
  b_ = -(rm1 * a_);
}

Fp EdsView::psi(i64 n) const {
  const Fp v = eval_window(magnitude(n), base_, inv_psi2_);
  return n < 0 ? -v : v;
}

Fp psi_eval(const EdsView& view, i64 n) { return view.psi(n); }

std::vector<Fp> psi_sequence(const EdsView& view, u64 count) {
  std::vector<Fp> out;
  out.reserve(count);
  const u64 p = view.curve().p();
  // seq[i] = Psi_i with seq[0] = Psi_0.
  std::vector<Fp> seq;
  seq.reserve(count + 1);
  seq.push_back(Fp(0, p));
  const PsiBase& base = view.base();
  const Fp initial[] = {Fp(1, p), base.psi2, base.psi3, base.psi4};
  for (u64 t = 1; t <= count && t <= 4; ++t) seq.push_back(initial[t - 1]);
  const Fp psi2_sq = base.psi2 * base.psi2;
  for (u64 t = 5; t <= count; ++t) {
    const Fp& divisor = seq[t - 4];
    if (divisor.is_zero()) {
      seq.push_back(view.psi(static_cast<i64>(t)));
      continue;
    }
    const Fp& cur = seq[t - 2];
    seq.push_back((seq[t - 1] * seq[t - 3] * psi2_sq - base.psi3 * cur * cur) * divisor.inv());
  }
  out.assign(seq.begin() + 1, seq.end());
  return out;
}

Fp psi_at(const Curve& curve, const Point& pt, i64 n) {
  const u64 p = curve.p();
  if (n == 0) return Fp(0, p);
  if (pt.is_infinity()) {
    if (n == 1) return Fp(1, p);
    if (n == -1) return -Fp(1, p);
    throw DomainError("Psi_n has a pole at the point at infinity");
  }
  const u64 mag = magnitude(n);
  Fp v;
  const PsiBase base = psi_base(curve, pt);
  if (pt.y().is_zero()) {
    if (mag % 2 == 0) return Fp(0, p);
    TwoTorsionPsi tt(p, base.psi3);
    v = tt.odd(mag);
  } else {
    v = eval_window(mag, base, base.psi2.inv());
  }
  return n < 0 ? -v : v;
}

Fp verify_recurrence(const EdsView& view, i64 h, i64 i, i64 j) {
  const Fp ph = view.psi(h), pi = view.psi(i), pj = view.psi(j);
  return view.psi(h + i) * view.psi(h - i) * pj * pj + view.psi(i + j) * view.psi(i - j) * ph * ph +
         view.psi(j + h) * view.psi(j - h) * pi * pi;
}

bool verify_nm(const EdsView& view, i64 n, i64 m) {
  if (n < 1 || m < 1) throw DomainError("verify_nm requires n, m >= 1");
  const Fp lhs = view.psi(n * m);
  const Point mp = view.curve().scalar_mul(m, view.point());
  if (mp.is_infinity()) return lhs.is_zero();
  const u64 p = view.curve().p();
  const u64 e = static_cast<u64>(static_cast<u128>(n) * static_cast<u128>(n) % (p - 1));
  const Fp psi_m = view.psi(m);
  // Fermat reduction of the exponent is only valid for a nonzero base.
  const Fp power = psi_m.is_zero() ? Fp(0, p) : psi_m.pow(e);
  return lhs == psi_at(view.curve(), mp, n) * power;
}

std::pair<Fp, Fp> lemma_constants(const EdsView& view) { return {view.a_const(), view.b_const()}; }

namespace {

// a^{ks} b^{s^2} with exponents reduced modulo p - 1 (a, b are nonzero).
Fp lemma_multiplier(const EdsView& view, u64 s, u64 k) {
  const u64 pm1 = view.curve().p() - 1;
  const u64 eks = static_cast<u64>(static_cast<u128>(k % pm1) * (s % pm1) % pm1);
  const u64 ess = static_cast<u64>(static_cast<u128>(s % pm1) * (s % pm1) % pm1);
  return view.a_const().pow(eks) * view.b_const().pow(ess);
}

}  // namespace

bool verify_parper(const EdsView& view, u64 s, u64 k) {
  if (s < 1 || k < 1) throw DomainError("verify_parper requires s, k >= 1");
  const u128 n = static_cast<u128>(s) * view.order() + k;
  if (n > static_cast<u128>(INT64_MAX)) throw DomainError("index sr + k exceeds the supported range");
  return view.psi(static_cast<i64>(n)) == lemma_multiplier(view, s, k) * view.psi(static_cast<i64>(k));
}

std::optional<ParperMismatch> verify_parper_range(const EdsView& view, u64 s_max, u64 k_max) {
  const u64 r = view.order();
  const auto seq = psi_sequence(view, s_max * r + k_max);
  auto at = [&](u64 n) { return seq[n - 1]; };
  for (u64 s = 1; s <= s_max; ++s) {
    const Fp a_s = view.a_const().pow(s);
    Fp mult = view.b_const().pow(s * s);
    for (u64 k = 1; k <= k_max; ++k) {
      mult *= a_s;
      if (!(at(s * r + k) == mult * at(k))) return ParperMismatch{s, k};
    }
  }
  return std::nullopt;
}

std::optional<u64> PsiPeriod::T64() const {
  const u128 t = T();
  if (t > static_cast<u128>(UINT64_MAX)) return std::nullopt;
  return static_cast<u64>(t);
}

PsiPeriod psi_period(const EdsView& view) {
  const u64 p = view.curve().p();
  const auto factors = factorize(p - 1);
  const u64 alpha = multiplicative_order(view.a_const().value(), p, factors);
  const u64 beta = multiplicative_order(view.b_const().value(), p, factors);
  // Least s with beta | s^2: halve every exponent of beta, rounding up.
  u64 s_beta = 1;
  for (const auto& [q, e] : factorize(beta)) {
    for (unsigned k = 0; k < (e + 1) / 2; ++k) s_beta *= q;
  }
  PsiPeriod period;
  period.r = view.order();
  period.s0 = lcm(alpha, s_beta);

  const u128 t = period.T();
  if (t < (static_cast<u128>(1) << 62)) {
    const i64 shift = static_cast<i64>(t);
    SplitMix64 rng(p ^ (view.order() << 17) ^ view.point().x().value());
    const u64 span = std::min<u64>(u64{1} << 40, (u64{1} << 62) - static_cast<u64>(shift));
    for (int i = 0; i < 100; ++i) {
      const i64 n = static_cast<i64>(rng.uniform(span));
      if (!(view.psi(n + shift) == view.psi(n))) {
        throw DomainError("period spot check failed at n = " + std::to_string(n));
      }
      ++period.spot_checks;
    }
  }
  return period;
}

}  // namespace divchar
