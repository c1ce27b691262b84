#include "divchar/charsum.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <string>

#include "divchar/error.hpp"
#include "numeric.hpp"

namespace divchar {

namespace {

using detail::CompensatedSum;
using detail::kUnitRoundoff;
using detail::summation_error;
using detail::unit_root;

u64 reduce_mod(i64 a, u64 R) {
  const i64 r = a % static_cast<i64>(R);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(R) : r);
}

void check_window(u64 R) {
  if (R > kWindowGuard) {
    throw GuardExceeded("period window R = " + std::to_string(R) + " exceeds " + std::to_string(kWindowGuard));
  }
}

}  // namespace

int chi_psi(const EdsView& view, i64 n) { return quadratic_character(view.psi(n)); }

std::vector<std::int8_t> chi_values(const EdsView& view, u64 count) {
  const auto seq = psi_sequence(view, count);
  std::vector<std::int8_t> out(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) out[i] = static_cast<std::int8_t>(quadratic_character(seq[i]));
  return out;
}

ChiSequence chi_sequence(const EdsView& view) {
  const u64 R = view.chi_window();
  check_window(R);
  const auto window = chi_values(view, 2 * R);
  for (u64 i = 0; i < R; ++i) {
    if (window[i] != window[i + R]) {
      throw DomainError("chi(Psi_n) does not repeat with period 2r at n = " + std::to_string(i + 1));
    }
  }
  ChiSequence out;
  out.R = R;
  out.values.assign(window.begin(), window.begin() + static_cast<std::ptrdiff_t>(R));
  for (u64 d : divisors(R)) {
    bool ok = true;
    for (u64 i = 0; i + d < 2 * R; ++i) {
      if (window[i] != window[i + d]) {
        ok = false;
        break;
      }
    }
    if (ok) {
      out.period = d;
      break;
    }
  }
  return out;
}

u64 chi_period(const EdsView& view) { return chi_sequence(view).period; }

i64 incomplete_sum(const EdsView& view, u64 N) {
  if (N == 0) return 0;
  const u64 R = view.chi_window();
  if (N <= R) {
    i64 s = 0;
    for (auto c : chi_values(view, N)) s += c;
    return s;
  }
  const auto chi = chi_sequence(view);
  i64 full = 0;
  for (auto c : chi.values) full += c;
  i64 tail = 0;
  for (u64 i = 0; i < N % R; ++i) tail += chi.values[i];
  return static_cast<i64>(N / R) * full + tail;
}

ComplexSum twisted_sum(std::span<const std::int8_t> chi, i64 a, std::span<const u64> order) {
  const u64 R = chi.size();
  ComplexSum out;
  if (R == 0) return out;
  const u64 ar = reduce_mod(a, R);
  CompensatedSum re, im;
  u64 nonzero = 0;
  for (u64 t = 0; t < R; ++t) {
    const u64 i = order.empty() ? t : order[t];
    const int c = chi[i];
    if (c == 0) continue;
    ++nonzero;
    const u64 k = static_cast<u64>(static_cast<u128>(ar) * (i + 1) % R);
    const auto z = unit_root(k, R);
    re.add(c * z.real());
    im.add(c * z.imag());
  }
  out.re = re.value();
  out.im = im.value();
  out.err_bound = summation_error(nonzero, R);
  return out;
}

ComplexSum complete_sum(const EdsView& view, i64 a) {
  const u64 R = view.chi_window();
  check_window(R);
  const auto chi = chi_values(view, R);
  return twisted_sum(chi, a);
}

std::vector<ComplexSum> complete_sums_direct(std::span<const std::int8_t> chi) {
  const u64 R = chi.size();
  std::vector<std::complex<double>> table(R);
  for (u64 k = 0; k < R; ++k) table[k] = unit_root(k, R);
  u64 nonzero = 0;
  for (auto c : chi) nonzero += (c != 0);
  const double err = summation_error(nonzero, R);

  std::vector<ComplexSum> out(R);
  for (u64 a = 0; a < R; ++a) {
    CompensatedSum re, im;
    u64 k = a % R;  // a * n mod R, advanced incrementally
    for (u64 i = 0; i < R; ++i) {
      if (chi[i] != 0) {
        re.add(chi[i] * table[k].real());
        im.add(chi[i] * table[k].imag());
      }
      k += a;
      if (k >= R) k -= R;
    }
    out[a] = {re.value(), im.value(), err};
  }
  return out;
}

namespace {
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Spectrum complete_sums_fft(std::span<const std::int8_t> chi) {
  const u64 R = chi.size();
  Spectrum out;
  if (R == 0) return out;
  const int n = static_cast<int>(R);
  fftw_complex* in = fftw_alloc_complex(R);
  fftw_complex* res = fftw_alloc_complex(R);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(n, in, res, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  // Slot j carries n = j, with n = R stored at j = 0 since e_R(aR) = 1.
  u64 nonzero = 0;
  for (u64 j = 0; j < R; ++j) {
    const int c = chi[(j + R - 1) % R];
    in[j][0] = c;
    in[j][1] = 0.0;
    nonzero += (c != 0);
  }
  fftw_execute(plan);
  out.values.resize(R);
  for (u64 a = 0; a < R; ++a) out.values[a] = {res[a][0], res[a][1]};
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(res);
  // Normwise FFT error model: log2(R) * eta * ||y||_2 with ||y||_2 = sqrt(R) ||x||_2.
  const double levels = std::ceil(std::log2(static_cast<double>(R))) + 1;
  out.err_bound = 16 * kUnitRoundoff * levels * std::sqrt(static_cast<double>(R)) *
                  std::sqrt(static_cast<double>(nonzero));
  return out;
}

double complete_envelope(u64 R, u64 q) {
  const double lq = std::log(static_cast<double>(q));
  return std::pow(static_cast<double>(R), 5.0 / 6.0) * std::pow(static_cast<double>(q), 1.0 / 12.0) *
         std::cbrt(lq);
}

double incomplete_envelope(u64 R, u64 q) {
  const double lq = std::log(static_cast<double>(q));
  return std::pow(static_cast<double>(R), 5.0 / 6.0) * std::pow(static_cast<double>(q), 1.0 / 12.0) *
         lq * std::cbrt(lq);
}

double bound_ratio(const EdsView& view, BoundMode mode, i64 a_or_N) {
  const u64 R = view.chi_window();
  const u64 q = view.curve().p();
  if (mode == BoundMode::complete) return complete_sum(view, a_or_N).modulus() / complete_envelope(R, q);
  if (a_or_N < 0) throw DomainError("incomplete sums need N >= 0");
  const double s = static_cast<double>(incomplete_sum(view, static_cast<u64>(a_or_N)));
  return std::abs(s) / incomplete_envelope(R, q);
}

BiasReport bias_report(const EdsView& view, u64 N) {
  if (N == 0) throw DomainError("bias_report needs N >= 1");
  BiasReport rep;
  for (auto c : chi_values(view, N)) {
    if (c > 0) ++rep.plus;
    else if (c < 0) ++rep.minus;
    else ++rep.zero;
  }
  rep.bias = (static_cast<double>(rep.plus) - static_cast<double>(rep.minus)) / static_cast<double>(N);
  return rep;
}

// Order-d characters -----------------------------------------------------------

std::vector<i64> order_d_indices(const EdsView& view, const OrderDCharacter& chi_d, u64 count) {
  const auto seq = psi_sequence(view, count);
  std::vector<i64> out(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto j = chi_d.index(seq[i]);
    out[i] = j ? static_cast<i64>(*j) : -1;
  }
  return out;
}

u64 order_d_period_bound(const EdsView& view, const OrderDCharacter& chi_d) {
  const u64 d = chi_d.order();
  const u64 ia = *chi_d.index(view.a_const());
  const u64 ib = *chi_d.index(view.b_const());
  for (u64 s = 1; s <= d; ++s) {
    if (static_cast<u128>(s) * ia % d == 0 && static_cast<u128>(s) * s % d * ib % d == 0) {
      return view.order() * s;
    }
  }
  return view.order() * d;
}

u64 order_d_observed_period(const EdsView& view, const OrderDCharacter& chi_d) {
  const u64 bound = order_d_period_bound(view, chi_d);
  check_window(2 * bound);
  const auto idx = order_d_indices(view, chi_d, 2 * bound);
  return minimal_period(std::span<const i64>(idx));
}

ComplexSum order_d_incomplete_sum(const EdsView& view, const OrderDCharacter& chi_d, u64 N) {
  ComplexSum out;
  if (N == 0) return out;
  CompensatedSum re, im;
  u64 nonzero = 0;
  for (i64 j : order_d_indices(view, chi_d, N)) {
    if (j < 0) continue;
    ++nonzero;
    const auto z = chi_d.root(static_cast<u64>(j));
    re.add(z.real());
    im.add(z.imag());
  }
  out.re = re.value();
  out.im = im.value();
  out.err_bound = summation_error(nonzero, N);
  return out;
}

ComplexSum order_d_complete_sum(const EdsView& view, const OrderDCharacter& chi_d, i64 a) {
  const u64 d = chi_d.order();
  const u64 R = d * view.order();
  check_window(R);
  const u64 ar = reduce_mod(a, R);
  const auto idx = order_d_indices(view, chi_d, R);
  CompensatedSum re, im;
  u64 nonzero = 0;
  for (u64 i = 0; i < R; ++i) {
    if (idx[i] < 0) continue;
    ++nonzero;
    const auto z = chi_d.root(static_cast<u64>(idx[i])) *
                   unit_root(static_cast<u64>(static_cast<u128>(ar) * (i + 1) % R), R);
    re.add(z.real());
    im.add(z.imag());
  }
  return {re.value(), im.value(), summation_error(nonzero, R, 2)};
}

ComplexSum order_d_sums(const EdsView& view, u64 d, BoundMode mode, i64 a_or_N) {
  if (d < 2) throw DomainError("character order must be at least 2");
  const OrderDCharacter chi_d(view.curve().field(), d);
  if (mode == BoundMode::complete) return order_d_complete_sum(view, chi_d, a_or_N);
  if (a_or_N < 0) throw DomainError("incomplete sums need N >= 0");
  return order_d_incomplete_sum(view, chi_d, static_cast<u64>(a_or_N));
}

}  // namespace divchar
