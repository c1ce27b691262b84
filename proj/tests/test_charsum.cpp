#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "divchar/charsum.hpp"
#include "divchar/error.hpp"
#include "oracle.hpp"

using namespace divchar;

namespace {

EdsView example() {
  const Curve E(5, 1, 1);
  return EdsView(E, E.point(0, 1));
}

EdsView random_view(SplitMix64& rng, u64 lo, u64 hi) {
  for (;;) {
    const Curve E = random_curve(next_prime(rng.uniform(lo, hi)), rng);
    const Point P = E.random_point(rng);
    if (P.y().is_zero()) continue;
    const EdsView v(E, P);
    if (v.order() >= 3) return v;
  }
}

std::vector<int> as_ints(const std::vector<std::int8_t>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(Chi, Examples) {
  const auto v = example();
  EXPECT_EQ(chi_psi(v, 1), 1);
  EXPECT_EQ(chi_psi(v, 2), -1);
  EXPECT_EQ(chi_psi(v, 9), 0);
  EXPECT_EQ(chi_psi(v, 18), 0);
}

TEST(Chi, ExamplePeriod) {
  const auto v = example();
  const auto seq = chi_sequence(v);
  EXPECT_EQ(seq.R, 18u);
  ASSERT_EQ(seq.values.size(), 18u);
  const auto window = as_ints(chi_values(v, 54));
  EXPECT_EQ(seq.period, oracle::naive_period(window));
  EXPECT_EQ(chi_period(v), seq.period);
  EXPECT_EQ(seq.at(19), seq.at(1));
}

TEST(Chi, TwoZerosPerWindow) {
  SplitMix64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const auto v = random_view(rng, 5, 3000);
    const auto seq = chi_sequence(v);
    EXPECT_EQ(std::count(seq.values.begin(), seq.values.end(), 0), 2);
    EXPECT_EQ(seq.values[v.order() - 1], 0);
    EXPECT_EQ(seq.values[2 * v.order() - 1], 0);
  }
}

TEST(Chi, PeriodAgreesWithGenericSearch) {
  SplitMix64 rng(2);
  for (int t = 0; t < 100; ++t) {
    const auto v = random_view(rng, 5, 400);
    const auto window = as_ints(chi_values(v, 3 * v.chi_window()));
    const u64 period = chi_period(v);
    EXPECT_EQ(period, oracle::naive_period(window));
    EXPECT_EQ(v.chi_window() % period, 0u);
  }
}

TEST(Chi, SquareMultipliersGivePeriodDividingR) {
  SplitMix64 rng(3);
  int seen = 0;
  for (int t = 0; t < 400 && seen < 20; ++t) {
    const auto v = random_view(rng, 5, 400);
    if (quadratic_character(v.a_const()) == 1 && quadratic_character(v.b_const()) == 1) {
      ++seen;
      EXPECT_EQ(v.order() % chi_period(v), 0u);
    }
  }
  EXPECT_GT(seen, 0);
}

TEST(IncompleteSum, Examples) {
  const auto v = example();
  EXPECT_EQ(incomplete_sum(v, 0), 0);
  EXPECT_EQ(incomplete_sum(v, 1), 1);
  EXPECT_EQ(incomplete_sum(v, 2), 0);
  SplitMix64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const auto w = random_view(rng, 5, 500);
    const u64 N = rng.uniform(1, 5 * w.chi_window());
    const auto chis = chi_values(w, N);
    EXPECT_EQ(incomplete_sum(w, N), std::accumulate(chis.begin(), chis.end(), i64{0}));
    EXPECT_LE(std::abs(incomplete_sum(w, N)), static_cast<i64>(N));
  }
}

TEST(CompleteSum, MatchesNaiveDft) {
  SplitMix64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto v = random_view(rng, 5, 2000);
    const auto chi = as_ints(chi_values(v, v.chi_window()));
    for (int k = 0; k < 10; ++k) {
      const i64 a = static_cast<i64>(rng.uniform(3 * v.chi_window())) - static_cast<i64>(v.chi_window());
      const auto mine = complete_sum(v, a);
      const auto ref = oracle::naive_twisted_sum(chi, a);
      EXPECT_LE(std::abs(mine.re - static_cast<double>(ref.real())), mine.err_bound + 1e-12);
      EXPECT_LE(std::abs(mine.im - static_cast<double>(ref.imag())), mine.err_bound + 1e-12);
    }
  }
}

TEST(CompleteSum, TrivialTwistIsTheFullSum) {
  SplitMix64 rng(6);
  for (int t = 0; t < 20; ++t) {
    const auto v = random_view(rng, 5, 5000);
    const auto t0 = complete_sum(v, 0);
    const double s = static_cast<double>(incomplete_sum(v, v.chi_window()));
    EXPECT_LE(std::abs(t0.re - s), t0.err_bound);
    EXPECT_LE(std::abs(t0.im), t0.err_bound);
    for (i64 a = 0; a < 20; ++a) {
      const auto ta = complete_sum(v, a);
      EXPECT_LE(ta.modulus(), static_cast<double>(v.chi_window() - 2) + ta.err_bound);
    }
  }
}

TEST(CompleteSum, ParsevalAndConjugateSymmetry) {
  SplitMix64 rng(7);
  for (int t = 0; t < 5; ++t) {
    const auto v = random_view(rng, 100, 1500);
    const u64 R = v.chi_window();
    const auto all = complete_sums_direct(chi_values(v, R));
    double total = 0;
    for (u64 a = 0; a < R; ++a) {
      total += std::norm(all[a].value());
      const auto& x = all[a];
      const auto& y = all[(R - a) % R];
      EXPECT_LE(std::abs(x.re - y.re), x.err_bound + y.err_bound);
      EXPECT_LE(std::abs(x.im + y.im), x.err_bound + y.err_bound);
    }
    const double expected = static_cast<double>(R) * static_cast<double>(R - 2);
    EXPECT_LE(std::abs(total - expected) / expected, 1e-6);
  }
}

TEST(CompleteSum, SummationOrderIndependent) {
  SplitMix64 rng(8);
  for (int t = 0; t < 10; ++t) {
    const auto v = random_view(rng, 1000, 50000);
    const auto chi = chi_values(v, v.chi_window());
    std::vector<u64> fwd(chi.size()), rev(chi.size()), shuf(chi.size());
    std::iota(fwd.begin(), fwd.end(), 0);
    std::reverse_copy(fwd.begin(), fwd.end(), rev.begin());
    shuf = fwd;
    std::shuffle(shuf.begin(), shuf.end(), rng);
    const i64 a = static_cast<i64>(rng.uniform(chi.size()));
    const auto x = twisted_sum(chi, a, fwd);
    for (const auto& order : {rev, shuf}) {
      const auto y = twisted_sum(chi, a, order);
      EXPECT_LE(std::abs(x.re - y.re), 2 * x.err_bound);
      EXPECT_LE(std::abs(x.im - y.im), 2 * x.err_bound);
    }
    const auto plain = twisted_sum(chi, a);
    EXPECT_EQ(plain.re, x.re);
    EXPECT_EQ(plain.im, x.im);
  }
}

TEST(CompleteSum, ErrorBoundStaysBelowSummandBudget) {
  SplitMix64 rng(9);
  const auto v = random_view(rng, 200000, 400000);
  const auto s = complete_sum(v, 12345);
  EXPECT_LE(s.err_bound, static_cast<double>(v.chi_window()) * std::ldexp(1.0, -40));
  EXPECT_LE(10'000'000 * (32 + 4) * std::ldexp(1.0, -53) + 4e14 * std::ldexp(1.0, -106),
            1e7 * std::ldexp(1.0, -40));
}

TEST(CompleteSum, FftMatchesDirect) {
  SplitMix64 rng(10);
  for (int t = 0; t < 10; ++t) {
    const auto v = random_view(rng, 50, 3000);
    const auto chi = chi_values(v, v.chi_window());
    const auto direct = complete_sums_direct(chi);
    const auto fft = complete_sums_fft(chi);
    ASSERT_EQ(fft.values.size(), direct.size());
    for (std::size_t a = 0; a < direct.size(); ++a) {
      EXPECT_LE(std::abs(fft.values[a] - direct[a].value()), fft.err_bound + direct[a].err_bound);
    }
  }
}

TEST(CompleteSum, GuardOnHugeWindows) {
  SplitMix64 rng(11);
  const auto v = random_view(rng, u64{1} << 60, u64{1} << 61);
  EXPECT_THROW(complete_sum(v, 1), GuardExceeded);
  EXPECT_THROW(chi_sequence(v), GuardExceeded);
}

TEST(BoundRatio, FiniteNonNegativeAndBelowTrivialBound) {
  SplitMix64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const auto v = random_view(rng, 5, 5000);
    const u64 R = v.chi_window();
    for (i64 a : {i64{0}, i64{1}, static_cast<i64>(R / 3)}) {
      const double ratio = bound_ratio(v, BoundMode::complete, a);
      EXPECT_TRUE(std::isfinite(ratio));
      EXPECT_GE(ratio, 0.0);
      EXPECT_LE(complete_sum(v, a).modulus() / static_cast<double>(R), 1.0);
    }
    const double ri = bound_ratio(v, BoundMode::incomplete, static_cast<i64>(R / 2));
    EXPECT_TRUE(std::isfinite(ri));
    EXPECT_GE(ri, 0.0);
  }
  EXPECT_NEAR(complete_envelope(64, 101), std::pow(64.0, 5.0 / 6) * std::pow(101.0, 1.0 / 12) * std::cbrt(std::log(101.0)), 1e-9);
  EXPECT_NEAR(incomplete_envelope(64, 101) / complete_envelope(64, 101), std::log(101.0), 1e-12);
}

TEST(Bias, CountsAndConsistency) {
  const auto v = example();
  const auto rep = bias_report(v, 18);
  const auto chis = chi_values(v, 18);
  EXPECT_EQ(rep.plus, static_cast<u64>(std::count(chis.begin(), chis.end(), 1)));
  EXPECT_EQ(rep.minus, static_cast<u64>(std::count(chis.begin(), chis.end(), -1)));
  EXPECT_EQ(rep.zero, 2u);
  SplitMix64 rng(13);
  for (int t = 0; t < 20; ++t) {
    const auto w = random_view(rng, 5, 3000);
    const u64 N = rng.uniform(1, 3 * w.chi_window());
    const auto b = bias_report(w, N);
    EXPECT_EQ(b.plus + b.minus + b.zero, N);
    EXPECT_EQ(b.zero, N / w.order());
    EXPECT_NEAR(b.bias * static_cast<double>(N), static_cast<double>(incomplete_sum(w, N)), 1e-9);
  }
  EXPECT_THROW(bias_report(v, 0), DomainError);
}

TEST(OrderD, OrderTwoReproducesQuadraticSums) {
  SplitMix64 rng(14);
  for (int t = 0; t < 20; ++t) {
    const auto v = random_view(rng, 5, 3000);
    const u64 R = v.chi_window();
    const i64 N = static_cast<i64>(rng.uniform(R));
    const auto s2 = order_d_sums(v, 2, BoundMode::incomplete, N);
    EXPECT_EQ(s2.re, static_cast<double>(incomplete_sum(v, static_cast<u64>(N))));
    EXPECT_EQ(s2.im, 0.0);
    const i64 a = static_cast<i64>(rng.uniform(R));
    const auto t2 = order_d_sums(v, 2, BoundMode::complete, a);
    const auto t1 = complete_sum(v, a);
    EXPECT_EQ(t2.re, t1.re);
    EXPECT_EQ(t2.im, t1.im);
  }
}

TEST(OrderD, ZerosAtMultiplesOfOrder) {
  SplitMix64 rng(15);
  for (int t = 0; t < 20; ++t) {
    const auto v = random_view(rng, 5, 2000);
    const u64 p = v.curve().p();
    const u64 d = divisors(p - 1)[divisors(p - 1).size() / 2];
    if (d < 2) continue;
    const OrderDCharacter chi_d(v.curve().field(), d);
    const auto idx = order_d_indices(v, chi_d, 3 * v.order());
    for (u64 n = 1; n <= idx.size(); ++n) EXPECT_EQ(idx[n - 1] < 0, n % v.order() == 0);
  }
}

TEST(OrderD, PeriodOverF7WithCubicCharacter) {
  const Curve E(7, 3, 2);
  const OrderDCharacter chi3(E.field(), 3);
  int checked = 0;
  for (const auto& P : E.enumerate_points()) {
    if (P.is_infinity() || P.y().is_zero()) continue;
    const EdsView v(E, P);
    if (v.order() < 3) continue;
    const u64 bound = order_d_period_bound(v, chi3);
    EXPECT_EQ((3 * v.order()) % bound, 0u);
    std::vector<i64> window = order_d_indices(v, chi3, 4 * bound);
    const u64 naive = oracle::naive_period(window);
    EXPECT_EQ(order_d_observed_period(v, chi3), naive);
    EXPECT_EQ(bound % naive, 0u);
    ++checked;
  }
  EXPECT_GT(checked, 0);
}

TEST(OrderD, PeriodBoundOnRandomCurves) {
  SplitMix64 rng(16);
  for (int t = 0; t < 40; ++t) {
    const auto v = random_view(rng, 5, 300);
    const u64 p = v.curve().p();
    for (u64 d : divisors(p - 1)) {
      if (d < 2 || d > 12) continue;
      const OrderDCharacter chi_d(v.curve().field(), d);
      const u64 bound = order_d_period_bound(v, chi_d);
      EXPECT_EQ(bound % order_d_observed_period(v, chi_d), 0u);
    }
  }
}

TEST(OrderD, RejectsInvalidOrder) {
  const auto v = example();
  EXPECT_THROW(order_d_sums(v, 3, BoundMode::complete, 0), DomainError);
  EXPECT_THROW(order_d_sums(v, 1, BoundMode::complete, 0), DomainError);
  EXPECT_NO_THROW(order_d_sums(v, 4, BoundMode::complete, 1));
}

TEST(MinimalPeriod, Basic) {
  const std::vector<int> s{1, 2, 1, 2, 1};
  EXPECT_EQ(minimal_period(std::span<const int>(s)), 2u);
  const std::vector<int> t{1, 1, 2};
  EXPECT_EQ(minimal_period(std::span<const int>(t)), 3u);
}
