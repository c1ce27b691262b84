#include <gtest/gtest.h>

#include "divchar/eds.hpp"
#include "divchar/error.hpp"
#include "oracle.hpp"

using namespace divchar;

namespace {

struct Example {
  Curve E{5, 1, 1};
  Point P = E.point(0, 1);
  EdsView view{E, P};
};

// A random point of order >= 3 on a random curve over a prime near `scale`.
EdsView random_view(SplitMix64& rng, u64 lo, u64 hi) {
  for (;;) {
    const Curve E = random_curve(next_prime(rng.uniform(lo, hi)), rng);
    const Point P = E.random_point(rng);
    if (P.y().is_zero()) continue;
    return EdsView(E, P);
  }
}

}  // namespace

TEST(Eds, ExampleValues) {
  Example ex;
  EXPECT_EQ(ex.view.order(), 9u);
  EXPECT_EQ(ex.view.chi_window(), 18u);
  EXPECT_EQ(psi_eval(ex.view, 0).value(), 0u);
  EXPECT_EQ(psi_eval(ex.view, 1).value(), 1u);
  EXPECT_EQ(psi_eval(ex.view, 2).value(), 2u);
  EXPECT_EQ(psi_eval(ex.view, 3).value(), 4u);
  EXPECT_EQ(psi_eval(ex.view, 9).value(), 0u);
  EXPECT_EQ(psi_eval(ex.view, -3).value(), 1u);
  const std::vector<u64> expected{1, 2, 4, 4, 3, 2, 4, 3, 0, 2, 1, 3, 2, 1, 1, 3, 4, 0};
  const auto seq = psi_sequence(ex.view, 18);
  ASSERT_EQ(seq.size(), 18u);
  for (std::size_t i = 0; i < 18; ++i) EXPECT_EQ(seq[i].value(), expected[i]) << i + 1;
}

TEST(Eds, BaseValuesMatchClosedForms) {
  Example ex;
  const auto base = psi_base(ex.E, ex.P);
  const auto ref = oracle::psi_pointwise(5, 1, 1, 0, 1, 4);
  EXPECT_EQ(base.psi2.value(), ref[2]);
  EXPECT_EQ(base.psi3.value(), ref[3]);
  EXPECT_EQ(base.psi4.value(), ref[4]);
}

TEST(Eds, RejectsTorsionAndOffCurvePoints) {
  const Curve E(7, 0, 1);
  EXPECT_THROW(EdsView(E, E.point(6, 0)), TorsionPoint);
  EXPECT_THROW(EdsView(E, Point::infinity()), TorsionPoint);
  EXPECT_THROW(EdsView(E, Point(E.field()(1), E.field()(1))), PointNotOnCurve);
  Example ex;
  EXPECT_THROW(EdsView(ex.E, ex.P, 3), DomainError);
  EXPECT_NO_THROW(EdsView(ex.E, ex.P, 9));
}

TEST(Eds, FastSequentialAndSymbolicAgree) {
  for (auto [p, a, b] : {std::tuple<u64, u64, u64>{5, 1, 1}, {7, 3, 2}, {11, 1, 6}, {13, 5, 8}}) {
    const Curve E(p, a, b);
    const auto polys = oracle::division_polys(p, a, b, 30);
    for (const auto& P : E.enumerate_points()) {
      if (P.is_infinity() || P.y().is_zero()) continue;
      const EdsView view(E, P);
      const auto seq = psi_sequence(view, 30);
      for (unsigned n = 1; n <= 30; ++n) {
        u64 sym = oracle::poly_eval(polys[n], P.x().value(), p);
        if (n % 2 == 0) sym = oracle::mulmod(sym, P.y().value(), p);
        ASSERT_EQ(seq[n - 1].value(), sym) << p << " n=" << n;
        ASSERT_EQ(psi_eval(view, n).value(), sym) << p << " n=" << n;
      }
    }
  }
}

TEST(Eds, SymbolicDegreesAndLeadingCoefficients) {
  const u64 p = 7;
  const auto polys = oracle::division_polys(p, 3, 2, 40);
  for (unsigned n = 1; n <= 40; ++n) {
    if (n % p == 0) continue;
    const std::size_t deg = (n % 2 == 1) ? (n * n - 1) / 2 : (n * n - 4) / 2;
    ASSERT_EQ(polys[n].size(), deg + 1) << n;
    EXPECT_EQ(polys[n].back(), n % p) << n;
  }
}

TEST(Eds, PsiAtHandlesTwoTorsion) {
  for (auto [p, a, b] : {std::tuple<u64, u64, u64>{7, 0, 1}, {5, 4, 0}, {13, 1, 0}, {101, 0, 1}}) {
    const Curve E(p, a, b);
    for (const auto& P : E.enumerate_points()) {
      if (P.is_infinity()) continue;
      const auto ref = oracle::psi_pointwise(p, a, b, P.x().value(), P.y().value(), 40);
      for (i64 n = 1; n <= 40; ++n) {
        ASSERT_EQ(psi_at(E, P, n).value(), ref[n]) << p << " n=" << n;
        ASSERT_EQ(psi_at(E, P, -n), -psi_at(E, P, n));
      }
    }
  }
  const Curve E(7, 0, 1);
  EXPECT_THROW(psi_at(E, Point::infinity(), 2), DomainError);
  EXPECT_EQ(psi_at(E, Point::infinity(), 1).value(), 1u);
}

TEST(Eds, ZerosExactlyAtMultiplesOfOrder) {
  SplitMix64 rng(3);
  for (int t = 0; t < 30; ++t) {
    const EdsView view = random_view(rng, 5, 500);
    const u64 r = view.order();
    const auto seq = psi_sequence(view, 4 * r);
    for (u64 n = 1; n <= 4 * r; ++n) ASSERT_EQ(seq[n - 1].is_zero(), n % r == 0) << n;
  }
}

TEST(Eds, SequentialMatchesFastAtLargePrimes) {
  SplitMix64 rng(5);
  for (int t = 0; t < 5; ++t) {
    const EdsView view = random_view(rng, u64{1} << 50, u64{1} << 61);
    const auto seq = psi_sequence(view, 3000);
    for (u64 n = 1; n <= 3000; ++n) ASSERT_EQ(seq[n - 1], psi_eval(view, static_cast<i64>(n))) << n;
  }
}

TEST(Eds, RecurrenceResidualVanishes) {
  SplitMix64 rng(7);
  for (int t = 0; t < 200; ++t) {
    const EdsView view = random_view(rng, 5, 100000);
    const auto idx = [&] { return static_cast<i64>(rng.uniform(2'000'001)) - 1'000'000; };
    EXPECT_TRUE(verify_recurrence(view, idx(), idx(), idx()).is_zero());
  }
  Example ex;
  EXPECT_TRUE(verify_recurrence(ex.view, 3, 2, 1).is_zero());
}

TEST(Eds, NmIdentity) {
  SplitMix64 rng(9);
  for (int t = 0; t < 200; ++t) {
    const EdsView view = random_view(rng, 5, 100000);
    EXPECT_TRUE(verify_nm(view, static_cast<i64>(rng.uniform(1, 300)), static_cast<i64>(rng.uniform(1, 300))));
  }
  Example ex;
  EXPECT_TRUE(verify_nm(ex.view, 2, 9));  // [9]P = O
  EXPECT_TRUE(verify_nm(ex.view, 5, 3));
  EXPECT_THROW(verify_nm(ex.view, 0, 3), DomainError);
}

TEST(Eds, LemmaConstantsFromTheSequence) {
  Example ex;
  const auto [a, b] = lemma_constants(ex.view);
  EXPECT_EQ(a.value(), 4u);
  EXPECT_EQ(b.value(), 3u);
  // Psi_{r+1} = a b Psi_1
  EXPECT_EQ(psi_eval(ex.view, 10), a * b);
  EXPECT_TRUE(verify_parper(ex.view, 1, 1));
}

TEST(Eds, QuotedConstantsFailTheIdentity) {
  // Psi_{r-2} / (Psi_{r-1} Psi_2) and Psi_{r-1}^2 Psi_2 / Psi_{r-2}.
  Example ex;
  const Fp r1 = psi_eval(ex.view, 8), r2 = psi_eval(ex.view, 7), p2 = psi_eval(ex.view, 2);
  const Fp a_quoted = r2 * (r1 * p2).inv();
  const Fp b_quoted = r1 * r1 * p2 * r2.inv();
  EXPECT_NE(psi_eval(ex.view, 10), a_quoted * b_quoted * psi_eval(ex.view, 1));
  EXPECT_EQ(a_quoted * ex.view.a_const(), ex.E.field().one());
  EXPECT_EQ(b_quoted, -ex.view.b_const());
}

TEST(Eds, ParperOnRandomInstances) {
  SplitMix64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const EdsView view = random_view(rng, 5, 2000);
    EXPECT_FALSE(verify_parper_range(view, 4, view.order()).has_value());
  }
  for (int t = 0; t < 20; ++t) {
    const EdsView view = random_view(rng, u64{1} << 40, u64{1} << 61);
    const u64 r = view.order();
    const u64 s = rng.uniform(1, 1000), k = rng.uniform(1, 1000);
    if (static_cast<double>(s) * static_cast<double>(r) > 4e18) continue;
    EXPECT_TRUE(verify_parper(view, s, k));
  }
}

TEST(Eds, PeriodExample) {
  Example ex;
  const auto per = psi_period(ex.view);
  EXPECT_EQ(per.r, 9u);
  EXPECT_EQ(per.s0, 2u);
  EXPECT_EQ(per.T64(), 18u);
  EXPECT_EQ(per.spot_checks, 100u);
}

TEST(Eds, PeriodIsExactAndMinimal) {
  SplitMix64 rng(13);
  for (int t = 0; t < 40; ++t) {
    const EdsView view = random_view(rng, 5, 60);
    const auto per = psi_period(view);
    const u64 T = *per.T64();
    const auto seq = psi_sequence(view, 3 * T);
    std::vector<u64> values;
    for (const auto& v : seq) values.push_back(v.value());
    EXPECT_EQ(oracle::naive_period(values), T);
  }
}
