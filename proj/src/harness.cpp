#include "divchar/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>
#include <tuple>

#include "divchar/charsum.hpp"
#include "divchar/eds.hpp"
#include "divchar/error.hpp"
#include "divchar/weil.hpp"

namespace divchar {

const char* library_version() { return DIVCHAR_VERSION; }

namespace {

constexpr u64 kMaxSequence = 10'000'000;
constexpr u64 kRecurrenceIndexLimit = 1'000'000;
constexpr u64 kNmIndexLimit = 1'000;
constexpr double kParsevalTolerance = 1e-6;
constexpr double kAveragingTolerance = 1e-8;

// Work-stealing map over items. Results land at the index of their item,
// so the output does not depend on the thread count. The exception from
// the lowest failing index is rethrown.
template <typename Item, typename Fn>
auto parallel_map(const std::vector<Item>& items, unsigned threads, Fn fn) {
  using Out = decltype(fn(items.front()));
  std::vector<Out> out(items.size());
  std::vector<std::exception_ptr> errors(items.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      try {
        out[i] = fn(items[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(items.size())));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

Curve require_curve(const ExperimentConfig& cfg) {
  if (!cfg.p || !cfg.a || !cfg.b) throw UsageError("--p, --a and --b are required");
  return Curve(*cfg.p, *cfg.a, *cfg.b);
}

Point require_point(const Curve& curve, const ExperimentConfig& cfg) {
  if (!cfg.px || !cfg.py) throw UsageError("--px and --py are required");
  return curve.point(*cfg.px, *cfg.py);
}

CurveSpec spec_of(const Curve& c) { return {c.p(), c.a().value(), c.b().value()}; }

PointSpec spec_of(const Point& pt) {
  if (pt.is_infinity()) return std::nullopt;
  return std::make_pair(pt.x().value(), pt.y().value());
}

json point_json(const Point& pt) {
  if (pt.is_infinity()) return "O";
  return {{"x", pt.x().value()}, {"y", pt.y().value()}};
}

json curve_json(const Curve& c) { return {{"p", c.p()}, {"a", c.a().value()}, {"b", c.b().value()}}; }

ResultRecord base_record(const std::string& kind, const ExperimentConfig& cfg) {
  ResultRecord rec;
  rec.kind = kind;
  rec.seed = cfg.seed;
  rec.version = library_version();
  return rec;
}

void attach(ResultRecord& rec, const EdsView& view) {
  rec.curve = spec_of(view.curve());
  rec.point = spec_of(view.point());
  rec.r = view.order();
  rec.R = view.chi_window();
}

json sum_json(const ComplexSum& s) { return {{"re", s.re}, {"im", s.im}, {"err", s.err_bound}}; }

std::vector<u64> primes_in(u64 lo, u64 hi) {
  std::vector<u64> out;
  for (u64 p = std::max<u64>(lo, 5); p <= hi; ++p) {
    if (is_prime(p)) out.push_back(p);
  }
  return out;
}

// Every nonsingular curve over every prime in the range, or the configured
// curve alone.
std::vector<CurveSpec> curve_list(const ExperimentConfig& cfg, u64 guard) {
  if (cfg.p) {
    const Curve c = require_curve(cfg);
    return {spec_of(c)};
  }
  if (cfg.p_max > guard) {
    throw GuardExceeded("--p-max " + std::to_string(cfg.p_max) + " exceeds " + std::to_string(guard));
  }
  std::vector<CurveSpec> out;
  for (u64 p : primes_in(cfg.p_min, cfg.p_max)) {
    for (u64 a = 0; a < p; ++a) {
      for (u64 b = 0; b < p; ++b) {
        const u128 disc = (4 * static_cast<u128>(pow_mod(a, 3, p)) + 27 * static_cast<u128>(mul_mod(b, b, p))) % p;
        if (disc != 0) out.push_back({p, a, b});
      }
    }
  }
  return out;
}

u64 coordinate_order(const GroupStructure& gs, u64 m, u64 l) { return lcm(gs.M / gcd(m, gs.M), gs.L / gcd(l, gs.L)); }

// Points of order >= 3 with their orders, in enumeration order.
std::vector<std::pair<Point, u64>> points_of_order_at_least_3(const Curve& curve) {
  const auto gs = group_structure(curve);
  const GroupIndex idx(curve, gs);
  std::vector<std::pair<Point, u64>> out;
  for (u64 m = 0; m < gs.M; ++m) {
    for (u64 l = 0; l < gs.L; ++l) {
      const u64 r = coordinate_order(gs, m, l);
      if (r >= 3) out.emplace_back(idx.points()[m * gs.L + l], r);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

std::vector<std::pair<Point, u64>> selected_points(const Curve& curve, const ExperimentConfig& cfg) {
  if (cfg.px || cfg.py) {
    const Point pt = require_point(curve, cfg);
    return {{pt, curve.point_order(pt)}};
  }
  return points_of_order_at_least_3(curve);
}

// Half-open range of twists from "a" or "lo:hi"; empty means [0, R).
std::pair<i64, i64> twist_range(const std::string& text, u64 R) {
  if (text.empty()) return {0, static_cast<i64>(R)};
  try {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
      const i64 a = std::stoll(text);
      return {a, a + 1};
    }
    const i64 lo = std::stoll(text.substr(0, colon));
    const i64 hi = std::stoll(text.substr(colon + 1));
    if (hi <= lo) throw UsageError("--twist-a range " + text + " is empty");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw UsageError("--twist-a expects an integer or lo:hi, got " + text);
  }
}

struct Tally {
  u64 trials = 0;
  u64 checks = 0;
  u64 failures = 0;
  json reproducer = nullptr;
  double max_ratio = 0.0;

  void merge(const Tally& o) {
    trials += o.trials;
    checks += o.checks;
    failures += o.failures;
    if (reproducer.is_null()) reproducer = o.reproducer;
    max_ratio = std::max(max_ratio, o.max_ratio);
  }

  void fail(json repro) {
    ++failures;
    if (reproducer.is_null()) reproducer = std::move(repro);
  }

  json to_json() const {
    json j = {{"trials", trials}, {"checks", checks}, {"failures", failures}};
    if (!reproducer.is_null()) j["reproducer"] = reproducer;
    return j;
  }
};

template <typename Fn>
Tally per_curve(const std::vector<CurveSpec>& curves, unsigned threads, Fn fn) {
  const auto parts = parallel_map(curves, threads, [&](const CurveSpec& cs) { return fn(Curve(cs.p, cs.a, cs.b)); });
  Tally total;
  for (const auto& t : parts) total.merge(t);
  return total;
}

Tally verify_parper_curve(const Curve& curve, const ExperimentConfig& cfg) {
  Tally t;
  for (const auto& [pt, r] : selected_points(curve, cfg)) {
    if (r < 3) continue;
    const EdsView view(curve, pt, r);
    ++t.trials;
    t.checks += 5 * r;
    if (auto bad = verify_parper_range(view, 5, r)) {
      t.fail({{"curve", curve_json(curve)}, {"point", point_json(pt)}, {"s", bad->s}, {"k", bad->k}});
    }
  }
  return t;
}

Tally verify_chi_period_curve(const Curve& curve, const ExperimentConfig& cfg) {
  Tally t;
  for (const auto& [pt, r] : selected_points(curve, cfg)) {
    if (r < 3) continue;
    const EdsView view(curve, pt, r);
    ++t.trials;
    ++t.checks;
    json repro = {{"curve", curve_json(curve)}, {"point", point_json(pt)}, {"r", r}};
    try {
      const auto seq = chi_sequence(view);
      if (seq.period == 0 || (2 * r) % seq.period != 0) {
        repro["period"] = seq.period;
        t.fail(repro);
      }
    } catch (const DomainError& e) {
      repro["error"] = e.what();
      t.fail(repro);
    }
  }
  return t;
}

Tally verify_weil_curve(const Curve& curve, const std::vector<u64>& ells) {
  Tally t;
  const WeilContext ctx(curve, DivisionProduct(ells));
  const auto& gs = ctx.structure();
  const auto full = ctx.all_full_sums();
  const auto subgroups = subgroups_of_small_index(gs, 4);
  for (const auto& h : subgroups) {
    for (u64 a = 0; a < gs.M; ++a) {
      for (u64 b = 0; b < gs.L; ++b) {
        const auto rep = ctx.check({a, b}, &h, &full);
        ++t.checks;
        t.max_ratio = std::max(t.max_ratio, rep.sum_modulus / rep.bound);
        const bool avg_ok = !rep.averaging_residual || *rep.averaging_residual <= kAveragingTolerance;
        if (!rep.within_bound || !avg_ok) {
          json gens = json::array();
          for (auto [m, l] : h.generators()) gens.push_back({m, l});
          t.fail({{"curve", curve_json(curve)},
                  {"omega", {a, b}},
                  {"subgroup", {{"generators", gens}, {"index", h.index()}}},
                  {"modulus", rep.sum_modulus},
                  {"bound", rep.bound},
                  {"averaging_residual", rep.averaging_residual.value_or(0.0)}});
        }
      }
    }
  }
  ++t.trials;
  return t;
}

// A random point of order >= 3 on a random curve over a prime from `primes`.
struct RandomInstance {
  Curve curve;
  Point point;
  u64 order;
};

RandomInstance random_instance(const ExperimentConfig& cfg, const std::vector<u64>& primes, SplitMix64& rng) {
  for (;;) {
    const Curve curve = cfg.p ? require_curve(cfg) : random_curve(primes[rng.uniform(primes.size())], rng);
    const Point pt = (cfg.px || cfg.py) ? require_point(curve, cfg) : curve.random_point(rng);
    if (pt.is_infinity() || pt.y().is_zero()) {
      if (cfg.px || cfg.py) throw TorsionPoint("the configured point has order <= 2");
      continue;
    }
    return {curve, pt, curve.point_order(pt)};
  }
}

i64 random_index(SplitMix64& rng, u64 limit) { return static_cast<i64>(rng.uniform(2 * limit + 1)) - static_cast<i64>(limit); }

Tally verify_recurrence_random(const ExperimentConfig& cfg) {
  const auto primes = primes_in(cfg.p_min, cfg.p_max);
  if (!cfg.p && primes.empty()) throw UsageError("no primes in [--p-min, --p-max]");
  SplitMix64 rng(cfg.seed);
  Tally t;
  for (u64 i = 0; i < cfg.trials; ++i) {
    const auto inst = random_instance(cfg, primes, rng);
    const EdsView view(inst.curve, inst.point, inst.order);
    const i64 h = random_index(rng, kRecurrenceIndexLimit);
    const i64 ii = random_index(rng, kRecurrenceIndexLimit);
    const i64 j = random_index(rng, kRecurrenceIndexLimit);
    ++t.trials;
    ++t.checks;
    if (!verify_recurrence(view, h, ii, j).is_zero()) {
      t.fail({{"curve", curve_json(inst.curve)}, {"point", point_json(inst.point)}, {"h", h}, {"i", ii}, {"j", j}});
    }
  }
  return t;
}

Tally verify_nm_random(const ExperimentConfig& cfg) {
  const auto primes = primes_in(cfg.p_min, cfg.p_max);
  if (!cfg.p && primes.empty()) throw UsageError("no primes in [--p-min, --p-max]");
  SplitMix64 rng(cfg.seed ^ 0x6e6dULL);
  Tally t;
  for (u64 i = 0; i < cfg.trials; ++i) {
    const auto inst = random_instance(cfg, primes, rng);
    const EdsView view(inst.curve, inst.point, inst.order);
    const i64 n = static_cast<i64>(rng.uniform(1, kNmIndexLimit));
    const i64 m = static_cast<i64>(rng.uniform(1, kNmIndexLimit));
    ++t.trials;
    ++t.checks;
    if (!verify_nm(view, n, m)) {
      t.fail({{"curve", curve_json(inst.curve)}, {"point", point_json(inst.point)}, {"n", n}, {"m", m}});
    }
  }
  return t;
}

// Bit pattern ordering key for scan output.
using ScanKey = std::tuple<u64, u64, u64, int, u64, u64>;

ScanKey scan_key(const ResultRecord& rec) {
  const auto& c = rec.curve.value_or(CurveSpec{});
  if (!rec.point || !*rec.point) return {c.p, c.a, c.b, 0, 0, 0};
  return {c.p, c.a, c.b, 1, (*rec.point)->first, (*rec.point)->second};
}

ResultRecord scan_one(const Curve& curve, const Point& pt, u64 r, const ExperimentConfig& cfg) {
  ResultRecord rec = base_record("scan", cfg);
  rec.curve = spec_of(curve);
  rec.point = spec_of(pt);
  rec.r = r;
  rec.R = 2 * r;
  json& pl = rec.payload;
  const u64 q = curve.p();
  pl["trivial_regime"] = static_cast<u128>(r) * r < q;
  if (r < 3) {
    pl["skipped"] = "order below 3";
    return rec;
  }
  const EdsView view(curve, pt, r);
  const u64 R = view.chi_window();
  const auto chi = chi_sequence(view);
  const auto spec = complete_sums_fft(chi.values);

  u64 failures = 0;
  u64 argmax = 0;
  double max_fft = -1.0;
  double parseval = 0.0;
  for (u64 a = 0; a < R; ++a) {
    const double m = std::abs(spec.values[a]);
    parseval += m * m;
    if (m > max_fft) {
      max_fft = m;
      argmax = a;
    }
    if (m > static_cast<double>(R - 2) + spec.err_bound) ++failures;
  }
  const auto direct = twisted_sum(chi.values, static_cast<i64>(argmax));
  if (direct.modulus() > static_cast<double>(R - 2) + direct.err_bound) ++failures;
  const double expected = static_cast<double>(R) * static_cast<double>(R - 2);
  const double parseval_residual = std::abs(parseval - expected) / expected;
  if (parseval_residual > kParsevalTolerance) ++failures;

  i64 s_r = 0;
  u64 plus = 0, minus = 0, zero = 0;
  for (auto c : chi.values) {
    s_r += c;
    plus += c > 0;
    minus += c < 0;
    zero += c == 0;
  }
  const double envelope = complete_envelope(R, q);
  pl["chi_period"] = chi.period;
  pl["S_R"] = s_r;
  pl["bias"] = {{"plus", plus}, {"minus", minus}, {"zero", zero}, {"bias", static_cast<double>(s_r) / static_cast<double>(R)}};
  pl["max_abs_T"] = direct.modulus();
  pl["argmax_a"] = argmax;
  pl["max_err"] = std::max(direct.err_bound, spec.err_bound);
  pl["envelope"] = envelope;
  pl["ratio"] = direct.modulus() / envelope;
  pl["parseval_residual"] = parseval_residual;
  pl["failures"] = failures;
  return rec;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

// Records ---------------------------------------------------------------------

u64 ResultRecord::failures() const {
  if (payload.is_object() && payload.contains("failures") && payload["failures"].is_number_integer()) {
    const i64 n = payload["failures"].get<i64>();
    return n > 0 ? static_cast<u64>(n) : 0;
  }
  return 0;
}

json to_json(const ResultRecord& rec) {
  json j;
  j["kind"] = rec.kind;
  j["curve"] = rec.curve ? json{{"p", rec.curve->p}, {"a", rec.curve->a}, {"b", rec.curve->b}} : json(nullptr);
  if (!rec.point) {
    j["point"] = nullptr;
  } else if (!*rec.point) {
    j["point"] = "O";
  } else {
    j["point"] = {{"x", (*rec.point)->first}, {"y", (*rec.point)->second}};
  }
  j["r"] = rec.r ? json(*rec.r) : json(nullptr);
  j["R"] = rec.R ? json(*rec.R) : json(nullptr);
  j["payload"] = rec.payload;
  j["seed"] = rec.seed;
  j["version"] = rec.version;
  return j;
}

std::vector<std::string> validate_record(const json& j) {
  std::vector<std::string> errs;
  if (!j.is_object()) return {"record is not an object"};
  for (const char* key : {"kind", "curve", "point", "r", "R", "payload", "seed", "version"}) {
    if (!j.contains(key)) errs.push_back(std::string("missing key ") + key);
  }
  if (!errs.empty()) return errs;
  if (j.size() != 8) errs.push_back("unexpected extra keys");
  if (!j["kind"].is_string()) errs.push_back("kind must be a string");
  const auto& c = j["curve"];
  if (!c.is_null()) {
    if (!c.is_object() || c.size() != 3) {
      errs.push_back("curve must be null or {p, a, b}");
    } else {
      for (const char* key : {"p", "a", "b"}) {
        if (!c.contains(key) || !c[key].is_number_unsigned()) errs.push_back(std::string("curve.") + key + " must be a non-negative integer");
      }
    }
  }
  const auto& pt = j["point"];
  if (!pt.is_null() && !(pt.is_string() && pt.get<std::string>() == "O")) {
    if (!pt.is_object() || pt.size() != 2 || !pt.contains("x") || !pt.contains("y") || !pt["x"].is_number_unsigned() ||
        !pt["y"].is_number_unsigned()) {
      errs.push_back("point must be null, \"O\" or {x, y}");
    }
  }
  for (const char* key : {"r", "R"}) {
    if (!j[key].is_null() && !j[key].is_number_unsigned()) errs.push_back(std::string(key) + " must be null or a non-negative integer");
  }
  if (!j["payload"].is_object()) errs.push_back("payload must be an object");
  if (!j["seed"].is_number_unsigned()) errs.push_back("seed must be a non-negative integer");
  if (!j["version"].is_string()) errs.push_back("version must be a string");
  return errs;
}

ResultRecord record_from_json(const json& j) {
  const auto errs = validate_record(j);
  if (!errs.empty()) throw UsageError("invalid record: " + errs.front());
  ResultRecord rec;
  rec.kind = j["kind"].get<std::string>();
  if (!j["curve"].is_null()) rec.curve = CurveSpec{j["curve"]["p"].get<u64>(), j["curve"]["a"].get<u64>(), j["curve"]["b"].get<u64>()};
  if (j["point"].is_string()) {
    rec.point = PointSpec{};
  } else if (j["point"].is_object()) {
    rec.point = PointSpec{std::make_pair(j["point"]["x"].get<u64>(), j["point"]["y"].get<u64>())};
  }
  if (!j["r"].is_null()) rec.r = j["r"].get<u64>();
  if (!j["R"].is_null()) rec.R = j["R"].get<u64>();
  rec.payload = j["payload"];
  rec.seed = j["seed"].get<u64>();
  rec.version = j["version"].get<std::string>();
  return rec;
}

ResultRecord error_record(const std::string& code, const std::string& message) {
  ResultRecord rec;
  rec.kind = "error";
  rec.version = library_version();
  rec.payload = {{"code", code}, {"message", message}};
  return rec;
}

int exit_status(const std::vector<ResultRecord>& records) {
  for (const auto& r : records) {
    if (r.failures() > 0) return 2;
  }
  return 0;
}

void write_jsonl(std::ostream& os, const std::vector<ResultRecord>& records) {
  for (const auto& r : records) os << to_json(r).dump() << '\n';
}

// Commands --------------------------------------------------------------------

ResultRecord cmd_eval(const ExperimentConfig& cfg) {
  const Curve curve = require_curve(cfg);
  const Point pt = require_point(curve, cfg);
  const EdsView view(curve, pt);
  ResultRecord rec = base_record("eval", cfg);
  attach(rec, view);
  json& pl = rec.payload;
  const auto period = psi_period(view);
  const auto t64 = period.T64();
  pl["period"] = {{"T", t64 ? json(*t64) : json(nullptr)}, {"s0", period.s0}, {"spot_checks", period.spot_checks}};
  pl["a_const"] = view.a_const().value();
  pl["b_const"] = view.b_const().value();
  if (cfg.n) {
    const Fp v = psi_eval(view, *cfg.n);
    pl["n"] = *cfg.n;
    pl["psi"] = v.value();
    pl["chi"] = quadratic_character(v);
  }
  if (cfg.cap_n) {
    if (*cfg.cap_n > kMaxSequence) throw GuardExceeded("--cap-n exceeds " + std::to_string(kMaxSequence));
    const auto seq = psi_sequence(view, *cfg.cap_n);
    json values = json::array();
    json chis = json::array();
    for (const auto& v : seq) {
      values.push_back(v.value());
      chis.push_back(quadratic_character(v));
    }
    pl["N"] = *cfg.cap_n;
    pl["sequence"] = std::move(values);
    pl["chi_sequence"] = std::move(chis);
  }
  return rec;
}

ResultRecord cmd_sums(const ExperimentConfig& cfg) {
  const Curve curve = require_curve(cfg);
  const Point pt = require_point(curve, cfg);
  const EdsView view(curve, pt);
  ResultRecord rec = base_record("sums", cfg);
  attach(rec, view);
  json& pl = rec.payload;
  const u64 R = view.chi_window();
  const u64 q = curve.p();
  if (R > kWindowGuard) throw GuardExceeded("R = " + std::to_string(R) + " exceeds " + std::to_string(kWindowGuard));
  u64 failures = 0;

  const u64 N = cfg.cap_n.value_or(R);
  if (N > kMaxSequence) throw GuardExceeded("--cap-n exceeds " + std::to_string(kMaxSequence));
  const i64 s = incomplete_sum(view, N);
  json sj = {{"N", N}, {"value", s}};
  if (N > 0) {
    const auto bias = bias_report(view, N);
    sj["plus"] = bias.plus;
    sj["minus"] = bias.minus;
    sj["zero"] = bias.zero;
    sj["bias"] = bias.bias;
    sj["ratio"] = std::abs(static_cast<double>(s)) / incomplete_envelope(R, q);
  }
  pl["S"] = std::move(sj);

  const auto chi = chi_values(view, R);
  const auto [lo, hi] = twist_range(cfg.twist_a, R);
  const u64 count = static_cast<u64>(hi - lo);
  const bool use_fft = static_cast<double>(count) * static_cast<double>(R) > 5e7;
  Spectrum spec;
  if (use_fft) spec = complete_sums_fft(chi);
  const double envelope = complete_envelope(R, q);
  std::vector<ComplexSum> sums;
  sums.reserve(count);
  json tj = json::array();
  double max_ratio = 0.0;
  for (i64 a = lo; a < hi; ++a) {
    ComplexSum t;
    if (use_fft) {
      const auto ar = static_cast<u64>(((a % static_cast<i64>(R)) + static_cast<i64>(R)) % static_cast<i64>(R));
      t = {spec.values[ar].real(), spec.values[ar].imag(), spec.err_bound};
    } else {
      t = twisted_sum(chi, a);
    }
    if (t.modulus() > static_cast<double>(R - 2) + t.err_bound) ++failures;
    max_ratio = std::max(max_ratio, t.modulus() / envelope);
    json e = sum_json(t);
    e["a"] = a;
    tj.push_back(std::move(e));
    sums.push_back(t);
  }
  pl["T"] = std::move(tj);
  pl["T_method"] = use_fft ? "fft" : "direct";
  pl["envelope"] = envelope;
  pl["max_ratio"] = max_ratio;

  json checks = json::object();
  const i64 s_r = std::accumulate(chi.begin(), chi.end(), i64{0});
  if (lo <= 0 && 0 < hi) {
    const auto& t0 = sums[static_cast<std::size_t>(-lo)];
    const bool ok = std::abs(t0.re - static_cast<double>(s_r)) <= t0.err_bound && std::abs(t0.im) <= t0.err_bound;
    checks["T0_equals_SR"] = ok;
    failures += !ok;
  }
  if (lo == 0 && hi == static_cast<i64>(R)) {
    double total = 0.0;
    bool conj_ok = true;
    for (u64 a = 0; a < R; ++a) {
      total += std::norm(sums[a].value());
      const auto& x = sums[a];
      const auto& y = sums[(R - a) % R];
      const double tol = x.err_bound + y.err_bound;
      conj_ok = conj_ok && std::abs(x.re - y.re) <= tol && std::abs(x.im + y.im) <= tol;
    }
    const double expected = static_cast<double>(R) * static_cast<double>(R - 2);
    const double residual = std::abs(total - expected) / expected;
    checks["parseval_residual"] = residual;
    checks["conjugate_symmetry"] = conj_ok;
    failures += residual > kParsevalTolerance;
    failures += !conj_ok;
  }
  pl["checks"] = std::move(checks);

  if (cfg.char_order) {
    const u64 d = *cfg.char_order;
    const OrderDCharacter chi_d(curve.field(), d);
    const u64 Rd = d * view.order();
    if (static_cast<double>(count) * static_cast<double>(Rd) > 1e9) throw GuardExceeded("order-d twist range too large");
    json od = {{"d", d}, {"R_d", Rd}};
    od["S"] = sum_json(order_d_incomplete_sum(view, chi_d, N));
    json tdj = json::array();
    for (i64 a = lo; a < hi; ++a) {
      json e = sum_json(order_d_complete_sum(view, chi_d, a));
      e["a"] = a;
      tdj.push_back(std::move(e));
    }
    od["T"] = std::move(tdj);
    const u64 bound = order_d_period_bound(view, chi_d);
    od["period_bound"] = bound;
    if (2 * bound <= kWindowGuard) {
      const u64 observed = order_d_observed_period(view, chi_d);
      od["observed_period"] = observed;
      const bool ok = bound % observed == 0;
      od["period_divides_bound"] = ok;
      failures += !ok;
    }
    pl["order_d"] = std::move(od);
  }
  pl["failures"] = failures;
  return rec;
}

ResultRecord cmd_verify(const ExperimentConfig& cfg) {
  static const std::vector<std::string> kLemmas = {"recurrence", "parper", "nm", "per-chi", "weil"};
  std::vector<std::string> lemmas;
  if (cfg.lemma == "all") {
    lemmas = kLemmas;
  } else if (std::find(kLemmas.begin(), kLemmas.end(), cfg.lemma) != kLemmas.end()) {
    lemmas = {cfg.lemma};
  } else {
    throw UsageError("unknown --lemma " + cfg.lemma);
  }
  ResultRecord rec = base_record("verify", cfg);
  if (cfg.p) {
    const Curve c = require_curve(cfg);
    rec.curve = spec_of(c);
    if (cfg.px || cfg.py) rec.point = spec_of(require_point(c, cfg));
  }
  json& pl = rec.payload;
  pl["p_range"] = {cfg.p_min, cfg.p_max};
  u64 failures = 0;
  json results = json::object();
  for (const auto& lemma : lemmas) {
    Tally t;
    if (lemma == "recurrence") {
      t = verify_recurrence_random(cfg);
    } else if (lemma == "nm") {
      t = verify_nm_random(cfg);
    } else if (lemma == "parper") {
      t = per_curve(curve_list(cfg, kEnumerationGuard), cfg.threads,
                    [&](const Curve& c) { return verify_parper_curve(c, cfg); });
    } else if (lemma == "per-chi") {
      t = per_curve(curve_list(cfg, kEnumerationGuard), cfg.threads,
                    [&](const Curve& c) { return verify_chi_period_curve(c, cfg); });
    } else {
      const std::vector<u64> ells = cfg.ells.empty() ? std::vector<u64>{3} : cfg.ells;
      const DivisionProduct f(ells);
      t = per_curve(curve_list(cfg, kWeilGuard), cfg.threads, [&](const Curve& c) { return verify_weil_curve(c, ells); });
      json r = t.to_json();
      r["ells"] = ells;
      r["d"] = f.degree();
      r["max_ratio"] = t.max_ratio;
      results[lemma] = std::move(r);
      failures += t.failures;
      continue;
    }
    results[lemma] = t.to_json();
    failures += t.failures;
  }
  pl["lemmas"] = std::move(results);
  pl["failures"] = failures;
  return rec;
}

std::vector<ResultRecord> cmd_scan(const ExperimentConfig& cfg) {
  if (cfg.p_max > kEnumerationGuard) throw GuardExceeded("--p-max exceeds " + std::to_string(kEnumerationGuard));
  std::vector<CurveSpec> curves;
  if (cfg.p) {
    curves.push_back(spec_of(require_curve(cfg)));
  } else if (cfg.curves == "all") {
    curves = curve_list(cfg, kEnumerationGuard);
  } else if (cfg.curves == "random") {
    SplitMix64 rng(cfg.seed);
    for (u64 p : primes_in(cfg.p_min, cfg.p_max)) {
      for (u64 i = 0; i < cfg.curves_per_prime; ++i) curves.push_back(spec_of(random_curve(p, rng)));
    }
  } else {
    throw UsageError("unknown --curves " + cfg.curves);
  }
  if (cfg.points != "max-order" && cfg.points != "all" && cfg.points != "given") {
    throw UsageError("unknown --points " + cfg.points);
  }
  if (cfg.points == "given" && (!cfg.p || !cfg.px || !cfg.py)) {
    throw UsageError("--points given needs --p, --a, --b, --px and --py");
  }

  auto per_curve_records = parallel_map(curves, cfg.threads, [&](const CurveSpec& cs) {
    const Curve curve(cs.p, cs.a, cs.b);
    std::vector<ResultRecord> out;
    if (cfg.points == "given") {
      const Point pt = require_point(curve, cfg);
      out.push_back(scan_one(curve, pt, curve.point_order(pt), cfg));
    } else if (cfg.points == "all") {
      for (const auto& [pt, r] : points_of_order_at_least_3(curve)) out.push_back(scan_one(curve, pt, r, cfg));
    } else {
      const auto [pt, M] = max_order_point(curve);
      out.push_back(scan_one(curve, pt, M, cfg));
    }
    return out;
  });
  std::vector<ResultRecord> records;
  for (auto& v : per_curve_records) {
    for (auto& r : v) records.push_back(std::move(r));
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const ResultRecord& x, const ResultRecord& y) { return scan_key(x) < scan_key(y); });
  return records;
}

ResultRecord cmd_bench(const ExperimentConfig& cfg) {
  using clock = std::chrono::steady_clock;
  SplitMix64 rng(cfg.seed);
  const u64 p = cfg.p.value_or(prev_prime((u64{1} << 62) - (u64{1} << 40)));
  const Curve curve = (cfg.a && cfg.b) ? Curve(p, *cfg.a, *cfg.b) : random_curve(p, rng);
  Point pt;
  if (cfg.px || cfg.py) {
    pt = require_point(curve, cfg);
  } else {
    do {
      pt = curve.random_point(rng);
    } while (pt.y().is_zero());
  }
  ResultRecord rec = base_record("bench", cfg);
  json& pl = rec.payload;
  u64 failures = 0;

  auto t0 = clock::now();
  const EdsView view(curve, pt);
  pl["view_seconds"] = seconds_since(t0);
  attach(rec, view);
  const u64 r = view.order();

  json evals = json::array();
  for (unsigned k : {1u, 8u, 16u, 32u, 48u, 62u}) {
    const i64 n = i64{1} << k;
    constexpr int kReps = 200;
    Fp v;
    t0 = clock::now();
    for (int i = 0; i < kReps; ++i) v = psi_eval(view, n);
    evals.push_back({{"k", k}, {"seconds", seconds_since(t0) / kReps}, {"psi", v.value()}});
  }
  pl["psi_eval"] = std::move(evals);

  // psi_eval(2^62) against Psi_{sr+k} = a^{ks} b^{s^2} Psi_k.
  const u64 n = u64{1} << 62;
  const Fp direct = psi_eval(view, static_cast<i64>(n));
  const u64 s = n / r;
  const u64 k = n % r;
  const u64 pm1 = p - 1;
  const u64 e_a = static_cast<u64>(static_cast<u128>(k % pm1) * (s % pm1) % pm1);
  const u64 e_b = static_cast<u64>(static_cast<u128>(s % pm1) * (s % pm1) % pm1);
  const Fp rebuilt = view.a_const().pow(e_a) * view.b_const().pow(e_b) * psi_eval(view, static_cast<i64>(k));
  json recon = {{"n", n}, {"s", s}, {"k", k}, {"psi", direct.value()}, {"rebuilt", rebuilt.value()}};
  recon["match"] = direct == rebuilt;
  failures += direct != rebuilt;
  const auto period = psi_period(view);
  if (auto T = period.T64()) {
    const Fp reduced = psi_eval(view, static_cast<i64>(n % *T));
    recon["T"] = *T;
    recon["reduced_match"] = reduced == direct;
    failures += reduced != direct;
  } else {
    recon["T"] = nullptr;
  }
  pl["reconstruction"] = std::move(recon);

  const u64 N = cfg.cap_n.value_or(1'000'000);
  if (N > kMaxSequence) throw GuardExceeded("--cap-n exceeds " + std::to_string(kMaxSequence));
  t0 = clock::now();
  const auto chis = chi_values(view, N);
  const double chi_seconds = seconds_since(t0);
  u64 spot_failures = 0;
  SplitMix64 spot(cfg.seed ^ 0x5eedULL);
  for (int i = 0; i < 100 && N > 0; ++i) {
    const u64 idx = spot.uniform(1, N);
    spot_failures += chi_psi(view, static_cast<i64>(idx)) != chis[idx - 1];
  }
  pl["chi_sequence"] = {{"N", N},
                        {"seconds", chi_seconds},
                        {"terms_per_second", chi_seconds > 0 ? static_cast<double>(N) / chi_seconds : 0.0},
                        {"spot_checks", N > 0 ? 100 : 0},
                        {"spot_failures", spot_failures}};
  failures += spot_failures;
  pl["failures"] = failures;
  return rec;
}

std::vector<ResultRecord> run_command(const std::string& command, const ExperimentConfig& cfg) {
  if (command == "eval") return {cmd_eval(cfg)};
  if (command == "sums") return {cmd_sums(cfg)};
  if (command == "verify") return {cmd_verify(cfg)};
  if (command == "scan") return cmd_scan(cfg);
  if (command == "bench") return {cmd_bench(cfg)};
  throw UsageError("unknown command " + command);
}

}  // namespace divchar
