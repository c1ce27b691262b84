#pragma once

// Brute-force multiplicative character sums over the points of a curve,
//   sum*_{P in H} omega(P) eta(f(P)),
// for f a product of distinct odd-index division polynomials, eta the
// quadratic character, omega a character of E(F_p) and H a subgroup. The
// sum skips the poles of f (only O for these f); zeros of f drop out
// because eta(0) = 0.

#include <memory>
#include <optional>
#include <vector>

#include "divchar/charsum.hpp"
#include "divchar/curve.hpp"

namespace divchar {

/// Largest p accepted by the Weil-sum routines.
inline constexpr u64 kWeilGuard = 1'000'000;

/// f = prod Psi_l over distinct odd l >= 3, of degree sum (l^2 - 1) / 2.
class DivisionProduct {
 public:
  /// Throws DomainError for an empty list, an even or small l, or a
  /// repeated l (which would make f a square).
  explicit DivisionProduct(std::vector<u64> ells);

  const std::vector<u64>& ells() const { return ells_; }
  u64 degree() const { return degree_; }

 private:
  std::vector<u64> ells_;
  u64 degree_ = 0;
};

/// omega(m genM + l genL) = e_M(a m) e_L(b l) = e_{ML}(a m L + b l M).
struct WeilCharacter {
  u64 a = 0;
  u64 b = 0;

  friend bool operator==(const WeilCharacter&, const WeilCharacter&) = default;
};

/// A subgroup of Z/M x Z/L given by generators in (m, l) coordinates.
class Subgroup {
 public:
  Subgroup(const GroupStructure& gs, std::vector<std::pair<u64, u64>> generators);

  static Subgroup whole(const GroupStructure& gs);

  bool contains(u64 m, u64 l) const { return members_[m * L_ + l]; }
  const std::vector<bool>& members() const { return members_; }
  /// Coordinate indices m L + l of the members, increasing.
  const std::vector<u64>& member_indices() const { return member_indices_; }
  const std::vector<std::pair<u64, u64>>& generators() const { return generators_; }
  u64 size() const { return size_; }
  u64 index() const { return (M_ * L_) / size_; }

  /// Whether the character vanishes on every generator, i.e. H lies in its
  /// kernel.
  bool annihilated_by(const WeilCharacter& w) const;

  /// Omega_H: every character whose kernel contains H.
  const std::vector<WeilCharacter>& annihilator() const { return annihilator_; }

  friend bool operator==(const Subgroup& x, const Subgroup& y) { return x.members_ == y.members_; }

 private:
  u64 M_;
  u64 L_;
  std::vector<std::pair<u64, u64>> generators_;
  std::vector<bool> members_;
  std::vector<u64> member_indices_;
  std::vector<WeilCharacter> annihilator_;
  u64 size_ = 0;
};

/// Every subgroup with |E(F_p) / H| <= max_index (at most 4): kernels of
/// characters of order <= max_index, and for index 4 also the kernels of
/// pairs of distinct order-2 characters. Sorted by index, deduplicated.
std::vector<Subgroup> subgroups_of_small_index(const GroupStructure& gs, u64 max_index);

/// Characters whose kernel contains H.
std::vector<WeilCharacter> annihilator(const GroupStructure& gs, const Subgroup& h);

struct WeilCheckReport {
  ComplexSum sum;
  double sum_modulus = 0.0;
  double bound = 0.0;  // 2 d sqrt(p)
  u64 d = 0;
  WeilCharacter omega;
  std::vector<std::pair<u64, u64>> subgroup_generators;
  u64 subgroup_index = 1;
  bool within_bound = true;
  /// For a proper subgroup: the mean over theta in Omega_H of the full sums
  /// for theta omega, and |direct - mean| / max(1, |direct|).
  std::optional<ComplexSum> averaged;
  std::optional<double> averaging_residual;
};

/// Per-curve, per-f state: the group structure, the coordinates of every
/// point, and eta(f(P)) at each of them. Immutable after construction.
class WeilContext {
 public:
  /// Throws GuardExceeded for p > kWeilGuard.
  WeilContext(const Curve& curve, DivisionProduct f);

  /// Reuses a group index built for the same curve.
  WeilContext(const Curve& curve, std::shared_ptr<const GroupIndex> index, DivisionProduct f);

  const Curve& curve() const { return curve_; }
  const DivisionProduct& f() const { return f_; }
  const GroupStructure& structure() const { return index_->structure(); }
  const GroupIndex& index() const { return *index_; }
  double bound() const;

  /// eta(f(P)) in coordinate order (index m L + l), 0 at O.
  const std::vector<std::int8_t>& eta() const { return eta_; }

  /// The starred sum over H (the whole group when h is null).
  ComplexSum sum(const WeilCharacter& w, const Subgroup* h = nullptr) const;

  /// Full-group sums for every character, at index a L + b.
  std::vector<ComplexSum> all_full_sums() const;

  /// Sum, bound comparison, and for a proper subgroup the averaging
  /// identity. `full_sums` may pass a precomputed all_full_sums().
  WeilCheckReport check(const WeilCharacter& w, const Subgroup* h = nullptr,
                        const std::vector<ComplexSum>* full_sums = nullptr) const;

 private:
  Curve curve_;
  DivisionProduct f_;
  std::shared_ptr<const GroupIndex> index_;
  std::vector<std::int8_t> eta_;
  std::vector<u64> support_;                 // indices with eta != 0
  std::vector<std::complex<double>> roots_;  // e_{ML}(k)
};

/// One-shot check. `subgroup_generators` are points of E(F_p); when absent
/// the whole group is used.
WeilCheckReport weil_sum_check(const Curve& curve, const std::vector<u64>& ells, const WeilCharacter& omega,
                               const std::optional<std::vector<Point>>& subgroup_generators = std::nullopt);

}  // namespace divchar
