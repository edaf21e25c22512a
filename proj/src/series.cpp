#include "hbgw/series.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hbgw {

std::string VarId::name() const {
  switch (tag) {
    case Tag::X: return "X";
    case Tag::Hbar2: return "h2";
    case Tag::Nu: return "nu";
    case Tag::ZInv: return "zi";
    case Tag::LambdaInv: return "li";
    case Tag::Todd: return "T" + std::to_string(2 * index + 1);
    case Tag::Tsmall: return "t" + std::to_string(index);
  }
  return "?";
}

namespace {

int resolve(int v, int fallback) {
  return v == TruncationPolicy::kAuto ? fallback : v;
}

}  // namespace

RingContext::RingContext(TruncationPolicy policy, VarSet active)
    : policy_(policy), active_(active) {
  if (policy.genus_max < 0 || policy.t_count_max < 0 || policy.t_index_max < 0 ||
      policy.x_degree_max < 0 || policy.aux_order < 0)
    throw std::invalid_argument("ring: negative truncation bound");

  hbar_min_ = policy.hbar_min;
  hbar_max_ = resolve(policy.hbar_max, policy.genus_max - 1);
  if (active.hbar2 && hbar_min_ > hbar_max_)
    throw std::invalid_argument("ring: hbar floor above cap");
  tsmall_sum_max_ = resolve(policy.tsmall_sum_max,
                            std::max(0, 3 * policy.genus_max - 3 + policy.t_count_max));
  int tsmall_index_max = resolve(policy.tsmall_index_max, tsmall_sum_max_);
  todd_weight_max_ = resolve(policy.todd_weight_max, TruncationPolicy::kUnbounded);
  int nu_max = resolve(policy.nu_max,
                       policy.t_count_max * (policy.t_index_max + 1) + 1);
  t_count_max_ = policy.t_count_max;

  auto push = [&](VarId v, int lo, int hi) {
    vars_.push_back(v);
    lo_.push_back(lo);
    hi_.push_back(hi);
  };

  if (active.x) {
    x_slot_ = static_cast<int>(vars_.size());
    push(var_x(), 0, policy.x_degree_max);
  }
  if (active.hbar2) {
    hbar_slot_ = static_cast<int>(vars_.size());
    push(var_hbar2(), hbar_min_, hbar_max_);
  }
  if (active.nu) {
    nu_slot_ = static_cast<int>(vars_.size());
    push(var_nu(), 0, nu_max);
  }
  if (active.zinv) {
    zinv_slot_ = static_cast<int>(vars_.size());
    push(var_zinv(), 0, policy.aux_order);
  }
  if (active.lambdainv) {
    lambdainv_slot_ = static_cast<int>(vars_.size());
    push(var_lambdainv(), 0, policy.aux_order);
  }
  todd_begin_ = static_cast<int>(vars_.size());
  if (active.todd) {
    for (int a = 0; a <= policy.t_index_max; ++a)
      push(var_T(a), 0, t_count_max_);
  }
  todd_end_ = static_cast<int>(vars_.size());
  tsmall_begin_ = todd_end_;
  if (active.tsmall) {
    for (int i = 0; i <= tsmall_index_max; ++i)
      push(var_t(i), 0, t_count_max_);
  }
  tsmall_end_ = static_cast<int>(vars_.size());
  if (vars_.empty())
    throw std::invalid_argument("ring: no active variables");

  termination_cap_ = 2;
  for (std::size_t s = 0; s < vars_.size(); ++s)
    termination_cap_ += hi_[s] - lo_[s];
}

int RingContext::slot_of(VarId v) const {
  switch (v.tag) {
    case VarId::Tag::X: return x_slot_;
    case VarId::Tag::Hbar2: return hbar_slot_;
    case VarId::Tag::Nu: return nu_slot_;
    case VarId::Tag::ZInv: return zinv_slot_;
    case VarId::Tag::LambdaInv: return lambdainv_slot_;
    case VarId::Tag::Todd:
      if (!active_.todd || v.index < 0 || todd_begin_ + v.index >= todd_end_)
        return -1;
      return todd_begin_ + v.index;
    case VarId::Tag::Tsmall:
      if (!active_.tsmall || v.index < 0 || tsmall_begin_ + v.index >= tsmall_end_)
        return -1;
      return tsmall_begin_ + v.index;
  }
  return -1;
}

RingContext::Fit RingContext::fit(const Monomial& m) const {
  if (static_cast<int>(m.size()) != slots())
    throw std::invalid_argument("monomial arity mismatch");
  for (int s = 0; s < slots(); ++s) {
    if (m[s] < lo_[s]) {
      if (s == hbar_slot_) return Fit::kFloor;
      return Fit::kOver;  // negative exponent on an N-graded slot
    }
    if (m[s] > hi_[s]) return Fit::kOver;
  }
  if (todd_end_ > todd_begin_) {
    long count = 0, weight = 0;
    for (int s = todd_begin_; s < todd_end_; ++s) {
      count += m[s];
      weight += static_cast<long>(2 * (s - todd_begin_) + 1) * m[s];
    }
    if (count > t_count_max_) return Fit::kOver;
    if (weight > todd_weight_max_) return Fit::kOver;
  }
  if (tsmall_end_ > tsmall_begin_) {
    long count = 0, wsum = 0;
    for (int s = tsmall_begin_; s < tsmall_end_; ++s) {
      count += m[s];
      wsum += static_cast<long>(s - tsmall_begin_) * m[s];
    }
    if (count > t_count_max_) return Fit::kOver;
    if (wsum > tsmall_sum_max_) return Fit::kOver;
  }
  return Fit::kOk;
}

RingPtr ring_new(const TruncationPolicy& policy, const VarSet& active) {
  return std::make_shared<const RingContext>(policy, active);
}

// --- Series ---

Series Series::constant(RingPtr ring, const Rational& c) {
  Series s(std::move(ring));
  if (c != 0) s.terms_.emplace(Monomial(s.ring_->slots(), 0), c);
  return s;
}

Series Series::variable(RingPtr ring, VarId v) {
  Monomial m(ring->slots(), 0);
  int slot = ring->slot_of(v);
  if (slot < 0)
    throw std::invalid_argument("variable " + v.name() + " not in ring");
  m[slot] = 1;
  return term(std::move(ring), m, 1);
}

Series Series::term(RingPtr ring, const Monomial& m, const Rational& c) {
  Series s(std::move(ring));
  auto f = s.ring_->fit(m);
  if (f == RingContext::Fit::kFloor)
    throw std::domain_error("term below hbar floor");
  if (f == RingContext::Fit::kOver)
    throw std::invalid_argument("term outside truncation box");
  if (c != 0) s.terms_.emplace(m, c);
  return s;
}

void Series::require_same_ring(const Series& b) const {
  if (!ring_->same_ring(*b.ring_))
    throw std::invalid_argument("series rings differ");
}

void Series::insert_term(const Monomial& m, const Rational& c) {
  auto [it, fresh] = terms_.try_emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Series Series::add(const Series& b) const {
  require_same_ring(b);
  Series r(*this);
  for (const auto& [m, c] : b.terms_) r.insert_term(m, c);
  return r;
}

Series Series::sub(const Series& b) const {
  require_same_ring(b);
  Series r(*this);
  for (const auto& [m, c] : b.terms_) r.insert_term(m, -c);
  return r;
}

Series Series::scale(const Rational& c) const {
  Series r(ring_);
  if (c == 0) return r;
  for (const auto& [m, v] : terms_) r.terms_.emplace(m, v * c);
  return r;
}

namespace {

// Accumulates a * b term-by-term into `out`. Floor breaches throw, over-cap
// products are dropped.
void mul_accumulate(const RingContext& ring,
                    const std::vector<std::pair<Monomial, Rational>>& a,
                    std::size_t a_begin, std::size_t a_end,
                    const std::map<Monomial, Rational>& b,
                    std::map<Monomial, Rational>& out) {
  const int n = ring.slots();
  Monomial prod(n, 0);
  for (std::size_t i = a_begin; i < a_end; ++i) {
    const auto& [ma, ca] = a[i];
    for (const auto& [mb, cb] : b) {
      for (int s = 0; s < n; ++s) prod[s] = static_cast<std::int16_t>(ma[s] + mb[s]);
      auto f = ring.fit(prod);
      if (f == RingContext::Fit::kFloor)
        throw std::domain_error("product below hbar floor");
      if (f == RingContext::Fit::kOver) continue;
      auto [it, fresh] = out.try_emplace(prod, ca * cb);
      if (!fresh) {
        it->second += ca * cb;
        if (it->second == 0) out.erase(it);
      }
    }
  }
}

}  // namespace

Series Series::mul_serial(const Series& b) const {
  require_same_ring(b);
  Series r(ring_);
  std::vector<std::pair<Monomial, Rational>> av(terms_.begin(), terms_.end());
  mul_accumulate(*ring_, av, 0, av.size(), b.terms_, r.terms_);
  return r;
}

Series Series::mul(const Series& b) const {
  require_same_ring(b);
#ifdef _OPENMP
  const std::size_t work = terms_.size() * b.terms_.size();
  if (work >= 4096 && omp_get_max_threads() > 1) {
    std::vector<std::pair<Monomial, Rational>> av(terms_.begin(), terms_.end());
    const int nt = omp_get_max_threads();
    std::vector<std::map<Monomial, Rational>> partial(nt);
    std::vector<std::string> errors(nt);
#pragma omp parallel num_threads(nt)
    {
      const int tid = omp_get_thread_num();
      const std::size_t chunk = (av.size() + nt - 1) / nt;
      const std::size_t lo = std::min(av.size(), tid * chunk);
      const std::size_t hi = std::min(av.size(), lo + chunk);
      try {
        mul_accumulate(*ring_, av, lo, hi, b.terms_, partial[tid]);
      } catch (const std::exception& e) {
        errors[tid] = e.what();
      }
    }
    for (const auto& e : errors)
      if (!e.empty()) throw std::domain_error(e);
    Series r(ring_);
    for (auto& p : partial)
      for (const auto& [m, c] : p) r.insert_term(m, c);
    return r;
  }
#endif
  return mul_serial(b);
}

Series Series::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  Series r = one(ring_);
  Series base(*this);
  while (n > 0) {
    if (n & 1) r = r.mul(base);
    n >>= 1;
    if (n > 0) base = base.mul(base);
  }
  return r;
}

Series Series::derive(VarId v) const {
  int slot = ring_->slot_of(v);
  if (slot < 0)
    throw std::invalid_argument("derive: variable " + v.name() + " not in ring");
  Series r(ring_);
  for (const auto& [m, c] : terms_) {
    if (m[slot] == 0) continue;
    Monomial d = m;
    d[slot] -= 1;
    r.terms_.emplace(std::move(d), c * m[slot]);
  }
  return r;
}

Series Series::shift(const Monomial& sh, const Rational& c) const {
  if (static_cast<int>(sh.size()) != ring_->slots())
    throw std::invalid_argument("shift arity mismatch");
  Series r(ring_);
  if (c == 0) return r;
  const int n = ring_->slots();
  Monomial prod(n, 0);
  for (const auto& [m, v] : terms_) {
    for (int s = 0; s < n; ++s) prod[s] = static_cast<std::int16_t>(m[s] + sh[s]);
    auto f = ring_->fit(prod);
    if (f == RingContext::Fit::kFloor)
      throw std::domain_error("shift below hbar floor");
    if (f == RingContext::Fit::kOver) continue;
    r.terms_.emplace(prod, v * c);
  }
  return r;
}

Series Series::exp_series() const {
  if (constant_term() != 0)
    throw std::invalid_argument("exp: nonzero constant term");
  // exp(sum c*m) = prod exp(c*m); each factor's power tower leaves the box
  // after finitely many steps because m is not constant.
  Series acc = one(ring_);
  const int n = ring_->slots();
  for (const auto& [m, c] : terms_) {
    Series factor = one(ring_);
    Monomial pk(n, 0);
    Rational ck = 1;
    for (int k = 1; k <= ring_->termination_cap(); ++k) {
      bool overflow = false;
      for (int s = 0; s < n; ++s) {
        int e = pk[s] + m[s];
        if (e > 30000 || e < -30000) overflow = true;
        pk[s] = static_cast<std::int16_t>(e);
      }
      auto f = overflow ? RingContext::Fit::kOver : ring_->fit(pk);
      if (f == RingContext::Fit::kFloor)
        throw std::domain_error("exp: power below hbar floor");
      if (f == RingContext::Fit::kOver) break;
      ck *= c;
      ck /= k;
      factor.insert_term(pk, ck);
    }
    acc = acc.mul(factor);
  }
  return acc;
}

Series Series::log_series() const {
  if (constant_term() != 1)
    throw std::invalid_argument("log: constant term is not 1");
  Series w = sub(one(ring_));
  Series acc = zero(ring_);
  Series wk = w;
  int k = 1;
  while (!wk.is_zero()) {
    if (k > ring_->termination_cap())
      throw std::domain_error("log: series does not terminate in this box");
    Rational c(k % 2 == 1 ? 1 : -1, k);
    acc = acc.add(wk.scale(c));
    wk = wk.mul(w);
    ++k;
  }
  return acc;
}

Series Series::inverse() const {
  Rational c0 = constant_term();
  if (c0 == 0)
    throw std::invalid_argument("inverse: zero constant term");
  Series u = scale(1 / c0).sub(one(ring_));  // nilpotent part
  Series acc = zero(ring_);
  Series uk = one(ring_);
  int k = 0;
  while (!uk.is_zero()) {
    if (k > ring_->termination_cap())
      throw std::domain_error("inverse: series does not terminate in this box");
    acc = acc.add(k % 2 == 0 ? uk : uk.scale(-1));
    uk = uk.mul(u);
    ++k;
  }
  return acc.scale(1 / c0);
}

Series Series::substitute(const RingPtr& target,
                          const std::map<VarId, Series>& assignments) const {
  for (const auto& [v, s] : assignments)
    if (!s.ring()->same_ring(*target))
      throw std::invalid_argument("substitute: assignment for " + v.name() +
                                  " lives in a different ring");
  // Lazily extended power tables for the assigned series.
  std::map<VarId, std::vector<Series>> powers;
  auto power_of = [&](VarId v, int e) -> const Series& {
    auto& tab = powers[v];
    if (tab.empty()) tab.push_back(Series::one(target));
    while (static_cast<int>(tab.size()) <= e)
      tab.push_back(tab.back().mul(assignments.at(v)));
    return tab[e];
  };

  Series out = zero(target);
  const auto& src_vars = ring_->vars();
  for (const auto& [m, c] : terms_) {
    // Untouched part first, then one assigned factor at a time.
    Monomial base(target->slots(), 0);
    std::vector<std::pair<VarId, int>> assigned;
    bool dropped = false;
    for (int s = 0; s < ring_->slots(); ++s) {
      if (m[s] == 0) continue;
      VarId v = src_vars[s];
      if (assignments.count(v)) {
        if (m[s] < 0)
          throw std::invalid_argument("substitute: negative exponent on " +
                                      v.name());
        assigned.emplace_back(v, m[s]);
        continue;
      }
      int slot = target->slot_of(v);
      if (slot < 0)
        throw std::invalid_argument("substitute: variable " + v.name() +
                                    " absent from target ring");
      base[slot] = m[s];
    }
    auto f = target->fit(base);
    if (f == RingContext::Fit::kFloor)
      throw std::domain_error("substitute: term below hbar floor");
    if (f == RingContext::Fit::kOver) dropped = true;
    if (dropped) continue;
    Series acc = Series::term(target, base, c);
    for (const auto& [v, e] : assigned) {
      acc = acc.mul(power_of(v, e));
      if (acc.is_zero()) break;
    }
    out = out.add(acc);
  }
  return out;
}

Series Series::restrict_to(const RingPtr& target) const {
  std::vector<int> map_slot(ring_->slots(), -1);
  const auto& src_vars = ring_->vars();
  for (int s = 0; s < ring_->slots(); ++s)
    map_slot[s] = target->slot_of(src_vars[s]);
  Series out(target);
  for (const auto& [m, c] : terms_) {
    Monomial tm(target->slots(), 0);
    bool outside = false;
    for (int s = 0; s < ring_->slots(); ++s) {
      if (m[s] == 0) continue;
      if (map_slot[s] < 0) {
        outside = true;  // variable absent from the target box
        break;
      }
      tm[map_slot[s]] = m[s];
    }
    if (outside) continue;
    if (target->fit(tm) != RingContext::Fit::kOk) continue;  // projection
    out.terms_.emplace(std::move(tm), c);
  }
  return out;
}

Series Series::hbar_part(int h) const {
  int slot = ring_->hbar_slot();
  if (slot < 0) throw std::invalid_argument("hbar_part: ring has no hbar");
  Series r(ring_);
  for (const auto& [m, c] : terms_)
    if (m[slot] == h) r.terms_.emplace(m, c);
  return r;
}

Series Series::hbar_slice(int h, const RingPtr& target) const {
  int slot = ring_->hbar_slot();
  if (slot < 0) throw std::invalid_argument("hbar_slice: ring has no hbar");
  std::vector<int> map_slot(ring_->slots(), -1);
  const auto& src_vars = ring_->vars();
  for (int s = 0; s < ring_->slots(); ++s) {
    if (s == slot) continue;
    map_slot[s] = target->slot_of(src_vars[s]);
  }
  Series out(target);
  for (const auto& [m, c] : terms_) {
    if (m[slot] != h) continue;
    Monomial tm(target->slots(), 0);
    for (int s = 0; s < ring_->slots(); ++s) {
      if (s == slot || m[s] == 0) continue;
      if (map_slot[s] < 0)
        throw std::invalid_argument("hbar_slice: variable " +
                                    src_vars[s].name() + " absent from target");
      tm[map_slot[s]] = m[s];
    }
    if (target->fit(tm) != RingContext::Fit::kOk) continue;
    out.terms_.emplace(std::move(tm), c);
  }
  return out;
}

Rational Series::coeff(const Monomial& m) const {
  auto f = ring_->fit(m);
  if (f != RingContext::Fit::kOk)
    throw std::invalid_argument("coeff: monomial outside truncation box");
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational Series::constant_term() const {
  Monomial m(ring_->slots(), 0);
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::string Series::to_text() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << to_string(c);
    for (int s = 0; s < ring_->slots(); ++s) {
      if (m[s] == 0) continue;
      os << "*" << ring_->vars()[s].name();
      if (m[s] != 1) os << "^" << m[s];
    }
  }
  return os.str();
}

// --- x-convention helpers ---

Series x_series(const RingPtr& ring) {
  return Series::variable(ring, var_x()).sub(Series::constant(ring, 2));
}

Series x_power(const RingPtr& ring, int k) {
  if (k >= 0) return x_series(ring).pow(k);
  // (X-2)^k = (-2)^k * (1 - X/2)^k expanded binomially
  int n = -k;
  Series out = Series::zero(ring);
  Rational neg2k = 1;
  for (int i = 0; i < n; ++i) neg2k /= -2;
  const int dmax = ring->policy().x_degree_max;
  for (int d = 0; d <= dmax; ++d) {
    // coefficient of X^d in (1 - X/2)^{-n}: C(n-1+d, d) / 2^d
    Rational c = binomial(static_cast<long>(n - 1 + d), static_cast<long>(d));
    Rational p2 = 1;
    for (int i = 0; i < d; ++i) p2 /= 2;
    Monomial m(ring->slots(), 0);
    m[ring->x_slot()] = static_cast<std::int16_t>(d);
    out = out.add(Series::term(ring, m, neg2k * c * p2));
  }
  return out;
}

Series log_neg_half_x(const RingPtr& ring) {
  // log(1 - X/2) = -sum_{d>=1} X^d / (d 2^d)
  Series out = Series::zero(ring);
  const int dmax = ring->policy().x_degree_max;
  Rational p2 = 1;
  for (int d = 1; d <= dmax; ++d) {
    p2 /= 2;
    Monomial m(ring->slots(), 0);
    m[ring->x_slot()] = static_cast<std::int16_t>(d);
    out = out.add(Series::term(ring, m, -p2 / d));
  }
  return out;
}

}  // namespace hbgw
