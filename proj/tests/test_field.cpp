#include <gtest/gtest.h>

#include "divchar/error.hpp"
#include "divchar/field.hpp"
#include "oracle.hpp"

using namespace divchar;

TEST(PrimeField, RejectsBadModuli) {
  for (u64 p : {0ULL, 1ULL, 2ULL, 3ULL, 4ULL, 9ULL, 91ULL, 1ULL << 62}) {
    EXPECT_THROW(PrimeField{p}, InvalidModulus) << p;
  }
  EXPECT_THROW(PrimeField{(u64{1} << 62) + 135}, InvalidModulus);
  EXPECT_NO_THROW(PrimeField{5});
  EXPECT_NO_THROW(PrimeField{4611684918915760121ULL});
}

TEST(Fp, Arithmetic) {
  const PrimeField F(7);
  EXPECT_EQ((F(5) + F(4)).value(), 2u);
  EXPECT_EQ((F(2) - F(5)).value(), 4u);
  EXPECT_EQ((F(3) * F(5)).value(), 1u);
  EXPECT_EQ((-F(3)).value(), 4u);
  EXPECT_EQ((-F(0)).value(), 0u);
  EXPECT_EQ(F(3).inv().value(), 5u);
  EXPECT_EQ(F.from_signed(-1).value(), 6u);
  EXPECT_EQ(F(3).pow(6).value(), 1u);
  EXPECT_FALSE(F(0).try_inv().has_value());
  EXPECT_THROW(F(0).inv(), DomainError);
}

TEST(Fp, InverseAtLargeModulus) {
  const u64 p = 4611684918915760121ULL;
  const PrimeField F(p);
  SplitMix64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Fp x = F(rng.uniform(1, p - 1));
    EXPECT_EQ((x * x.inv()).value(), 1u);
  }
}

TEST(QuadraticCharacter, MatchesSquareTable) {
  for (u64 p : {5ULL, 7ULL, 11ULL, 13ULL, 101ULL, 997ULL}) {
    const PrimeField F(p);
    const oracle::SquareTable t(p);
    for (u64 x = 0; x < p; ++x) ASSERT_EQ(quadratic_character(F(x)), t.chi(x)) << p << " " << x;
  }
}

TEST(QuadraticCharacter, Examples) {
  const PrimeField F(5);
  EXPECT_EQ(quadratic_character(F(2)), -1);
  EXPECT_EQ(quadratic_character(F(4)), 1);
  EXPECT_EQ(quadratic_character(F(0)), 0);
}

TEST(Sqrt, RootsSquareBack) {
  for (u64 p : {5ULL, 13ULL, 17ULL, 97ULL, 65537ULL, 4611684918915760121ULL}) {
    const PrimeField F(p);
    SplitMix64 rng(p);
    for (int i = 0; i < 100; ++i) {
      const Fp x = F(rng.uniform(p));
      const auto r = divchar::sqrt(x);
      ASSERT_EQ(r.has_value(), quadratic_character(x) >= 0);
      if (r) {
        EXPECT_EQ((*r * *r).value(), x.value());
        EXPECT_LE(r->value(), p - r->value());
      }
    }
  }
}

TEST(PrimitiveRoot, SmallestGenerator) {
  EXPECT_EQ(primitive_root(5), 2u);
  EXPECT_EQ(primitive_root(7), 3u);
  EXPECT_EQ(primitive_root(41), 6u);
  for (u64 p : {11ULL, 23ULL, 103ULL, 191ULL}) {
    const u64 g = primitive_root(p);
    EXPECT_TRUE(oracle::naive_log(g, 1, p).has_value());
    u64 v = 1, ord = 0;
    do {
      v = v * g % p;
      ++ord;
    } while (v != 1);
    EXPECT_EQ(ord, p - 1);
    for (u64 h = 2; h < g; ++h) {
      u64 w = 1, o = 0;
      do {
        w = w * h % p;
        ++o;
      } while (w != 1);
      EXPECT_LT(o, p - 1) << h;
    }
  }
}

TEST(OrderDCharacter, IndexMatchesDiscreteLog) {
  for (auto [p, d] : {std::pair<u64, u64>{7, 3}, {13, 4}, {13, 6}, {31, 5}, {101, 10}, {101, 100}}) {
    const PrimeField F(p);
    const OrderDCharacter chi(F, d);
    EXPECT_EQ(chi.generator(), primitive_root(p));
    for (u64 x = 1; x < p; ++x) {
      const auto j = chi.index(F(x));
      ASSERT_TRUE(j.has_value());
      EXPECT_EQ(*j, *oracle::naive_log(chi.generator(), x, p) % d) << p << " " << x;
    }
    EXPECT_FALSE(chi.index(F(0)).has_value());
    EXPECT_EQ(chi(F(0)), std::complex<double>(0.0, 0.0));
  }
}

TEST(OrderDCharacter, OrderTwoIsQuadratic) {
  const PrimeField F(23);
  const OrderDCharacter chi(F, 2);
  for (u64 x = 0; x < 23; ++x) {
    const auto v = chi(F(x));
    EXPECT_EQ(v.real(), static_cast<double>(quadratic_character(F(x))));
    EXPECT_EQ(v.imag(), 0.0);
  }
}

TEST(OrderDCharacter, QuarterTurnsExact) {
  const PrimeField F(13);
  const OrderDCharacter chi(F, 4);
  EXPECT_EQ(chi.root(0), std::complex<double>(1, 0));
  EXPECT_EQ(chi.root(1), std::complex<double>(0, 1));
  EXPECT_EQ(chi.root(2), std::complex<double>(-1, 0));
  EXPECT_EQ(chi.root(3), std::complex<double>(0, -1));
}

TEST(OrderDCharacter, Multiplicative) {
  const PrimeField F(61);
  const OrderDCharacter chi(F, 5);
  for (u64 x = 1; x < 61; ++x) {
    for (u64 y = 1; y < 61; y += 7) {
      EXPECT_EQ(*chi.index(F(x) * F(y)), (*chi.index(F(x)) + *chi.index(F(y))) % 5);
    }
  }
}

TEST(OrderDCharacter, RejectsNonDivisor) {
  const PrimeField F(13);
  EXPECT_THROW(OrderDCharacter(F, 5), DomainError);
  EXPECT_THROW(OrderDCharacter(F, 0), DomainError);
}
