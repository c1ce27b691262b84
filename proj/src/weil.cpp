#include "divchar/weil.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "divchar/error.hpp"
#include "numeric.hpp"

namespace divchar {

using detail::CompensatedSum;
using detail::summation_error;
using detail::unit_root;

DivisionProduct::DivisionProduct(std::vector<u64> ells) : ells_(std::move(ells)) {
  if (ells_.empty()) throw DomainError("f needs at least one division polynomial");
  std::set<u64> seen;
  for (u64 l : ells_) {
    if (l < 3 || l % 2 == 0) throw DomainError("division polynomial index must be odd and >= 3, got " + std::to_string(l));
    if (!seen.insert(l).second) throw DomainError("repeated index " + std::to_string(l) + " makes f a square");
    degree_ += (l * l - 1) / 2;
  }
}

namespace {

// omega(m, l) = e_{ML}(a m L + b l M); trivial iff the exponent vanishes.
bool character_trivial_at(const WeilCharacter& w, u64 M, u64 L, u64 m, u64 l) {
  if (M * L < (u64{1} << 31)) {
    const u64 n = M * L;
    return ((w.a % M) * m % M * L + (w.b % L) * l % L * M) % n == 0;
  }
  const u128 ml = static_cast<u128>(M) * L;
  const u128 e = (static_cast<u128>(w.a) * m % M * L + static_cast<u128>(w.b) * l % L * M) % ml;
  return e == 0;
}

u64 character_order(const WeilCharacter& w, u64 M, u64 L) {
  return lcm(M / gcd(w.a, M), L / gcd(w.b, L));
}

std::vector<bool> closure(u64 M, u64 L, const std::vector<std::pair<u64, u64>>& gens) {
  std::vector<bool> in(M * L, false);
  std::vector<std::pair<u64, u64>> frontier{{0, 0}};
  in[0] = true;
  while (!frontier.empty()) {
    auto [m, l] = frontier.back();
    frontier.pop_back();
    for (auto [gm, gl] : gens) {
      const u64 nm = (m + gm) % M;
      const u64 nl = (l + gl) % L;
      if (!in[nm * L + nl]) {
        in[nm * L + nl] = true;
        frontier.emplace_back(nm, nl);
      }
    }
  }
  return in;
}

// Generators for a subgroup given as a membership mask, picked greedily in
// coordinate order.
std::vector<std::pair<u64, u64>> greedy_generators(u64 M, u64 L, const std::vector<bool>& members) {
  std::vector<std::pair<u64, u64>> gens;
  std::vector<bool> span = closure(M, L, gens);
  for (u64 i = 0; i < M * L; ++i) {
    if (members[i] && !span[i]) {
      gens.emplace_back(i / L, i % L);
      span = closure(M, L, gens);
    }
  }
  return gens;
}

Subgroup kernel(const GroupStructure& gs, const std::vector<WeilCharacter>& chars) {
  std::vector<bool> members(gs.M * gs.L, false);
  for (u64 m = 0; m < gs.M; ++m) {
    for (u64 l = 0; l < gs.L; ++l) {
      bool in = true;
      for (const auto& w : chars) in = in && character_trivial_at(w, gs.M, gs.L, m, l);
      members[m * gs.L + l] = in;
    }
  }
  return Subgroup(gs, greedy_generators(gs.M, gs.L, members));
}

}  // namespace

Subgroup::Subgroup(const GroupStructure& gs, std::vector<std::pair<u64, u64>> generators)
    : M_(gs.M), L_(gs.L), generators_(std::move(generators)) {
  for (auto& [m, l] : generators_) {
    m %= M_;
    l %= L_;
  }
  members_ = closure(M_, L_, generators_);
  for (u64 i = 0; i < members_.size(); ++i) {
    if (members_[i]) member_indices_.push_back(i);
  }
  size_ = member_indices_.size();
  for (u64 a = 0; a < M_; ++a) {
    for (u64 b = 0; b < L_; ++b) {
      if (annihilated_by({a, b})) annihilator_.push_back({a, b});
    }
  }
}

Subgroup Subgroup::whole(const GroupStructure& gs) {
  std::vector<std::pair<u64, u64>> gens;
  if (gs.M > 1) gens.emplace_back(1, 0);
  if (gs.L > 1) gens.emplace_back(0, 1);
  return Subgroup(gs, std::move(gens));
}

bool Subgroup::annihilated_by(const WeilCharacter& w) const {
  for (auto [m, l] : generators_) {
    if (!character_trivial_at(w, M_, L_, m, l)) return false;
  }
  return true;
}

std::vector<Subgroup> subgroups_of_small_index(const GroupStructure& gs, u64 max_index) {
  if (max_index < 1 || max_index > 4) throw DomainError("subgroup index bound must be in [1, 4]");
  std::vector<Subgroup> out;
  auto add = [&](Subgroup h) {
    if (h.index() > max_index) return;
    if (std::find(out.begin(), out.end(), h) == out.end()) out.push_back(std::move(h));
  };
  std::vector<WeilCharacter> order_two;
  for (u64 a = 0; a < gs.M; ++a) {
    for (u64 b = 0; b < gs.L; ++b) {
      const WeilCharacter w{a, b};
      const u64 t = character_order(w, gs.M, gs.L);
      if (t > max_index) continue;
      add(kernel(gs, {w}));
      if (t == 2) order_two.push_back(w);
    }
  }
  if (max_index >= 4) {
    for (std::size_t i = 0; i < order_two.size(); ++i) {
      for (std::size_t j = i + 1; j < order_two.size(); ++j) add(kernel(gs, {order_two[i], order_two[j]}));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Subgroup& x, const Subgroup& y) { return x.index() < y.index(); });
  return out;
}

std::vector<WeilCharacter> annihilator(const GroupStructure& gs, const Subgroup& h) {
  if (h.members().size() != gs.M * gs.L) throw DomainError("subgroup belongs to a different group");
  return h.annihilator();
}

namespace {
const Curve& guarded(const Curve& curve) {
  if (curve.p() > kWeilGuard) {
    throw GuardExceeded("Weil sums need p <= " + std::to_string(kWeilGuard) + ", got " + std::to_string(curve.p()));
  }
  return curve;
}
}  // namespace

WeilContext::WeilContext(const Curve& curve, DivisionProduct f)
    : WeilContext(curve, std::make_shared<const GroupIndex>(guarded(curve), group_structure(curve)), std::move(f)) {}

WeilContext::WeilContext(const Curve& curve, std::shared_ptr<const GroupIndex> index, DivisionProduct f)
    : curve_(guarded(curve)), f_(std::move(f)), index_(std::move(index)) {
  const auto& pts = index_->points();
  eta_.resize(pts.size(), 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].is_infinity()) continue;
    int e = 1;
    for (u64 l : f_.ells()) e *= quadratic_character(psi_at(curve_, pts[i], static_cast<i64>(l)));
    eta_[i] = static_cast<std::int8_t>(e);
  }
  for (u64 i = 0; i < eta_.size(); ++i) {
    if (eta_[i] != 0) support_.push_back(i);
  }
  const u64 n = eta_.size();
  roots_.resize(n);
  for (u64 k = 0; k < n; ++k) roots_[k] = unit_root(k, n);
}

double WeilContext::bound() const {
  return 2.0 * static_cast<double>(f_.degree()) * std::sqrt(static_cast<double>(curve_.p()));
}

ComplexSum WeilContext::sum(const WeilCharacter& w, const Subgroup* h) const {
  const auto& gs = index_->structure();
  const u64 n = gs.M * gs.L;
  const u64 ca = (w.a % gs.M) * gs.L;
  const u64 cb = (w.b % gs.L) * gs.M;
  CompensatedSum re, im;
  u64 terms = 0;
  auto add = [&](u64 i) {
    const int e = eta_[i];
    if (e == 0) return;
    ++terms;
    const auto& z = roots_[(ca * (i / gs.L) + cb * (i % gs.L)) % n];
    re.add(e * z.real());
    im.add(e * z.imag());
  };
  if (h == nullptr || h->index() == 1) {
    for (u64 i : support_) add(i);
  } else {
    for (u64 i : h->member_indices()) add(i);
  }
  return {re.value(), im.value(), summation_error(terms, n)};
}

std::vector<ComplexSum> WeilContext::all_full_sums() const {
  const auto& gs = index_->structure();
  std::vector<ComplexSum> out(gs.M * gs.L);
  for (u64 a = 0; a < gs.M; ++a) {
    for (u64 b = 0; b < gs.L; ++b) out[a * gs.L + b] = sum({a, b});
  }
  return out;
}

WeilCheckReport WeilContext::check(const WeilCharacter& w, const Subgroup* h,
                                   const std::vector<ComplexSum>* full_sums) const {
  const auto& gs = index_->structure();
  WeilCheckReport rep;
  rep.omega = {w.a % gs.M, w.b % gs.L};
  rep.d = f_.degree();
  rep.bound = bound();
  const bool whole = h == nullptr || h->index() == 1;
  rep.sum = (whole && full_sums) ? (*full_sums)[rep.omega.a * gs.L + rep.omega.b] : sum(rep.omega, h);
  rep.sum_modulus = rep.sum.modulus();
  rep.within_bound = rep.sum_modulus <= rep.bound + rep.sum.err_bound;
  if (h != nullptr) {
    rep.subgroup_generators = h->generators();
    rep.subgroup_index = h->index();
  }
  if (h != nullptr && h->index() > 1) {
    CompensatedSum re, im;
    double err = 0.0;
    const auto& omega_h = h->annihilator();
    for (const auto& t : omega_h) {
      const WeilCharacter tw{(t.a + rep.omega.a) % gs.M, (t.b + rep.omega.b) % gs.L};
      const ComplexSum s = full_sums ? (*full_sums)[tw.a * gs.L + tw.b] : sum(tw);
      re.add(s.re);
      im.add(s.im);
      err = std::max(err, s.err_bound);
    }
    const double k = static_cast<double>(omega_h.size());
    ComplexSum avg{re.value() / k, im.value() / k, err};
    rep.averaging_residual = std::abs(rep.sum.value() - avg.value()) / std::max(1.0, rep.sum_modulus);
    rep.averaged = avg;
  }
  return rep;
}

WeilCheckReport weil_sum_check(const Curve& curve, const std::vector<u64>& ells, const WeilCharacter& omega,
                               const std::optional<std::vector<Point>>& subgroup_generators) {
  const WeilContext ctx(curve, DivisionProduct(ells));
  if (!subgroup_generators) return ctx.check(omega);
  std::vector<std::pair<u64, u64>> gens;
  for (const auto& pt : *subgroup_generators) gens.push_back(ctx.index().coordinates(pt));
  const Subgroup h(ctx.structure(), std::move(gens));
  return ctx.check(omega, &h);
}

}  // namespace divchar
