#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hbgw/rational.hpp"

namespace hbgw {

// Formal variables. Todd index a stands for the odd time T_{2a+1}; Tsmall
// index i stands for t_i. Hbar2 is the square hbar^2 (exponent -1 means
// hbar^-2); Nu is the square N^2. ZInv and LambdaInv are auxiliary
// expansion variables z^-1 and lambda^-1.
struct VarId {
  enum class Tag : std::uint8_t { X, Hbar2, Nu, ZInv, LambdaInv, Todd, Tsmall };
  Tag tag = Tag::X;
  int index = 0;  // used by Todd / Tsmall only

  friend bool operator==(const VarId& a, const VarId& b) {
    return a.tag == b.tag && a.index == b.index;
  }
  friend bool operator<(const VarId& a, const VarId& b) {
    if (a.tag != b.tag) return a.tag < b.tag;
    return a.index < b.index;
  }
  std::string name() const;
};

inline VarId var_x() { return {VarId::Tag::X, 0}; }
inline VarId var_hbar2() { return {VarId::Tag::Hbar2, 0}; }
inline VarId var_nu() { return {VarId::Tag::Nu, 0}; }
inline VarId var_zinv() { return {VarId::Tag::ZInv, 0}; }
inline VarId var_lambdainv() { return {VarId::Tag::LambdaInv, 0}; }
inline VarId var_T(int a) { return {VarId::Tag::Todd, a}; }   // T_{2a+1}
inline VarId var_t(int i) { return {VarId::Tag::Tsmall, i}; }  // t_i

// Truncation box. The first five fields are the user-facing knobs; the
// remaining ones refine the box for internal rings and default (kAuto) to
// values derived from the primary five:
//   hbar_max        = genus_max - 1
//   tsmall_sum_max  = max(0, 3*genus_max - 3 + t_count_max)
//   tsmall_index_max = tsmall_sum_max
//   todd_weight_max = unbounded
//   nu_max          = t_count_max * (t_index_max + 1) + 1
// hbar_min is the Laurent floor on the Hbar2 exponent: arithmetic that would
// go below it is an error, not a truncation.
struct TruncationPolicy {
  static constexpr int kAuto = -1000000;
  static constexpr int kUnbounded = 1000000;

  int genus_max = 2;
  int t_count_max = 3;
  int t_index_max = 2;
  int x_degree_max = 5;
  int aux_order = 8;

  int hbar_min = -1;
  int hbar_max = kAuto;
  int tsmall_sum_max = kAuto;
  int tsmall_index_max = kAuto;
  int todd_weight_max = kAuto;
  int nu_max = kAuto;

  friend bool operator==(const TruncationPolicy&, const TruncationPolicy&) = default;
};

struct VarSet {
  bool x = false;
  bool hbar2 = false;
  bool nu = false;
  bool zinv = false;
  bool lambdainv = false;
  bool todd = false;
  bool tsmall = false;

  friend bool operator==(const VarSet&, const VarSet&) = default;
};

// Exponent vector parallel to RingContext::vars(). Only the Hbar2 slot may
// be negative.
using Monomial = std::vector<std::int16_t>;

class RingContext {
 public:
  RingContext(TruncationPolicy policy, VarSet active);

  const TruncationPolicy& policy() const { return policy_; }
  const VarSet& active() const { return active_; }
  const std::vector<VarId>& vars() const { return vars_; }
  int slots() const { return static_cast<int>(vars_.size()); }
  /// Slot of a variable, -1 when the ring does not carry it.
  int slot_of(VarId v) const;

  bool same_ring(const RingContext& other) const {
    return policy_ == other.policy_ && active_ == other.active_;
  }

  enum class Fit { kOk, kOver, kFloor };
  Fit fit(const Monomial& m) const;

  int hbar_slot() const { return hbar_slot_; }
  int x_slot() const { return x_slot_; }
  int nu_slot() const { return nu_slot_; }
  int todd_begin() const { return todd_begin_; }
  int todd_end() const { return todd_end_; }
  int tsmall_begin() const { return tsmall_begin_; }
  int tsmall_end() const { return tsmall_end_; }

  int hbar_min() const { return hbar_min_; }
  int hbar_max() const { return hbar_max_; }

  /// Sum of box diameters; loop bound for series inversions.
  int termination_cap() const { return termination_cap_; }

 private:
  TruncationPolicy policy_;
  VarSet active_;
  std::vector<VarId> vars_;
  std::vector<int> lo_, hi_;
  int x_slot_ = -1, hbar_slot_ = -1, nu_slot_ = -1, zinv_slot_ = -1,
      lambdainv_slot_ = -1;
  int todd_begin_ = 0, todd_end_ = 0, tsmall_begin_ = 0, tsmall_end_ = 0;
  int t_count_max_ = 0, tsmall_sum_max_ = 0, todd_weight_max_ = 0;
  int hbar_min_ = -1, hbar_max_ = 0;
  int termination_cap_ = 0;
};

using RingPtr = std::shared_ptr<const RingContext>;

RingPtr ring_new(const TruncationPolicy& policy, const VarSet& active);

// Sparse truncated multivariate series over Q. Immutable value semantics;
// all binary operations require structurally identical rings and throw
// std::invalid_argument otherwise. Products exceeding upper truncation
// bounds are dropped; products below the Hbar2 floor throw
// std::domain_error.
class Series {
 public:
  explicit Series(RingPtr ring) : ring_(std::move(ring)) {}

  static Series zero(RingPtr ring) { return Series(std::move(ring)); }
  static Series constant(RingPtr ring, const Rational& c);
  static Series one(RingPtr ring) { return constant(std::move(ring), 1); }
  static Series variable(RingPtr ring, VarId v);
  /// Single term c * m; out-of-box monomials throw.
  static Series term(RingPtr ring, const Monomial& m, const Rational& c);

  const RingPtr& ring() const { return ring_; }
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Series add(const Series& b) const;
  Series sub(const Series& b) const;
  Series scale(const Rational& c) const;
  Series mul(const Series& b) const;         // dispatches to the OpenMP kernel
  Series mul_serial(const Series& b) const;  // reference implementation
  Series pow(int n) const;
  Series derive(VarId v) const;

  /// Multiply by a single monomial (floor-checked, truncating).
  Series shift(const Monomial& m, const Rational& c) const;

  /// exp of a series with zero constant term.
  Series exp_series() const;
  /// log of a series with constant term 1.
  Series log_series() const;
  /// Inverse of a series with nonzero constant term.
  Series inverse() const;

  /// Map this series into `target`, substituting the variables listed in
  /// `assignments` (series over `target`) and carrying the remaining ones
  /// over. Per-monomial products are folded untouched-part-first so that
  /// Hbar2 floors are only reported when genuinely breached.
  Series substitute(const RingPtr& target,
                    const std::map<VarId, Series>& assignments) const;

  /// Project into `target`: shared variables keep exponents; terms that
  /// fall outside the target box or touch variables absent from `target`
  /// are dropped.
  Series restrict_to(const RingPtr& target) const;

  /// Terms with Hbar2 exponent == h, kept in the same ring.
  Series hbar_part(int h) const;
  /// Terms with Hbar2 exponent == h, with the Hbar2 slot stripped.
  Series hbar_slice(int h, const RingPtr& target) const;

  /// Coefficient of an in-box monomial; querying outside the box throws.
  Rational coeff(const Monomial& m) const;
  Rational constant_term() const;

  std::string to_text() const;

  friend bool operator==(const Series& a, const Series& b) {
    return a.ring_->same_ring(*b.ring_) && a.terms_ == b.terms_;
  }

 private:
  void require_same_ring(const Series& b) const;
  void insert_term(const Monomial& m, const Rational& c);

  RingPtr ring_;
  std::map<Monomial, Rational> terms_;
};

// --- x-convention helpers (x = X - 2, expansions around X = 0) ---

/// x = X - 2 as a series.
Series x_series(const RingPtr& ring);
/// x^k for integer k (negative powers expand (X-2)^k binomially).
Series x_power(const RingPtr& ring, int k);
/// log(-x/2) = log(1 - X/2) expanded through the ring's X cap.
Series log_neg_half_x(const RingPtr& ring);

}  // namespace hbgw
