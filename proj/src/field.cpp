#include "divchar/field.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "divchar/error.hpp"

namespace divchar {

std::optional<Fp> Fp::try_inv() const {
  if (v_ == 0) return std::nullopt;
  i64 r0 = static_cast<i64>(p_), r1 = static_cast<i64>(v_);
  i64 t0 = 0, t1 = 1;
  while (r1 != 0) {
    const i64 q = r0 / r1;
    i64 tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  assert(r0 == 1);
  return Fp::from_signed(t0, p_);
}

Fp Fp::inv() const {
  auto r = try_inv();
  if (!r) throw DomainError("inverse of zero in F_" + std::to_string(p_));
  return *r;
}

PrimeField::PrimeField(u64 p) : p_(p) {
  if (p <= 3) throw InvalidModulus("modulus must exceed 3, got " + std::to_string(p));
  if (p >= kMaxModulus) throw InvalidModulus("modulus must be below 2^62, got " + std::to_string(p));
  if (!is_prime(p)) throw InvalidModulus("modulus is composite: " + std::to_string(p));
}

int quadratic_character(const Fp& x) {
  if (x.is_zero()) return 0;
  const u64 e = x.pow((x.modulus() - 1) / 2).value();
  return e == 1 ? 1 : -1;
}

std::optional<Fp> sqrt(const Fp& x) {
  const u64 p = x.modulus();
  if (x.is_zero()) return x;
  if (quadratic_character(x) != 1) return std::nullopt;

  Fp root;
  if (p % 4 == 3) {
    root = x.pow((p + 1) / 4);
  } else {
    u64 q = p - 1;
    unsigned s = 0;
    while ((q & 1) == 0) {
      q >>= 1;
      ++s;
    }
    u64 z = 2;
    while (quadratic_character(Fp(z, p)) != -1) ++z;
    Fp c = Fp(z, p).pow(q);
    Fp t = x.pow(q);
    root = x.pow((q + 1) / 2);
    unsigned m = s;
    const Fp one(1, p);
    while (!(t == one)) {
      unsigned i = 0;
      Fp t2 = t;
      while (!(t2 == one)) {
        t2 *= t2;
        ++i;
      }
      Fp b = c;
      for (unsigned k = 0; k + i + 1 < m; ++k) b *= b;
      m = i;
      c = b * b;
      t *= c;
      root *= b;
    }
  }
  const Fp other = -root;
  return other.value() < root.value() ? other : root;
}

u64 primitive_root(u64 p) {
  if (p == 2) return 1;
  const auto factors = factorize(p - 1);
  for (u64 g = 2;; ++g) {
    bool ok = true;
    for (const auto& f : factors) {
      if (pow_mod(g, (p - 1) / f.prime, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
}

OrderDCharacter::OrderDCharacter(const PrimeField& field, u64 d) : p_(field.modulus()), d_(d) {
  if (d == 0 || (p_ - 1) % d != 0) {
    throw DomainError("character order " + std::to_string(d) + " does not divide p - 1 = " +
                      std::to_string(p_ - 1));
  }
  g_ = primitive_root(p_);
  cofactor_ = (p_ - 1) / d_;
  const u64 zeta = pow_mod(g_, cofactor_, p_);
  baby_count_ = isqrt(d_);
  if (baby_count_ * baby_count_ < d_) ++baby_count_;
  baby_.reserve(baby_count_);
  u64 acc = 1;
  for (u64 j = 0; j < baby_count_; ++j) {
    baby_.emplace(acc, j);
    acc = mul_mod(acc, zeta, p_);
  }
  // acc = zeta^baby_count; its inverse is zeta^(d - baby_count).
  giant_step_ = pow_mod(zeta, (d_ - baby_count_ % d_) % d_, p_);
}

std::optional<u64> OrderDCharacter::index(const Fp& x) const {
  assert(x.modulus() == p_);
  if (x.is_zero()) return std::nullopt;
  u64 h = pow_mod(x.value(), cofactor_, p_);
  for (u64 i = 0; i * baby_count_ < d_ + baby_count_; ++i) {
    if (auto it = baby_.find(h); it != baby_.end()) {
      return (i * baby_count_ + it->second) % d_;
    }
    h = mul_mod(h, giant_step_, p_);
  }
  assert(false && "element outside the order-d subgroup");
  return std::nullopt;
}

std::complex<double> OrderDCharacter::root(u64 j) const {
  j %= d_;
  if (j == 0) return {1.0, 0.0};
  if (2 * j == d_) return {-1.0, 0.0};
  if (4 * j == d_) return {0.0, 1.0};
  if (4 * j == 3 * d_) return {0.0, -1.0};
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(d_);
  return {std::cos(angle), std::sin(angle)};
}

std::complex<double> OrderDCharacter::operator()(const Fp& x) const {
  const auto j = index(x);
  if (!j) return {0.0, 0.0};
  return root(*j);
}

}  // namespace divchar
