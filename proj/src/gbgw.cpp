#include "hbgw/gbgw.hpp"

#include <algorithm>
#include <stdexcept>

namespace hbgw {

namespace {

Rational pow2(int k) {
  Rational r = 1;
  for (int i = 0; i < k; ++i) r *= 2;
  return r;
}

Rational neg2_pow(int k) {
  Rational r = 1;
  for (int i = 0; i < k; ++i) r *= -2;
  return r;
}

int todd_index_max(const RingPtr& ring) {
  return ring->todd_end() - ring->todd_begin() - 1;
}

}  // namespace

RingPtr gbgw_working_ring(int weight_cap) {
  if (weight_cap < 1)
    throw std::invalid_argument("gbgw_working_ring: cap must be positive");
  TruncationPolicy p;
  p.genus_max = weight_cap / 2 + 1;
  p.t_count_max = weight_cap;
  p.t_index_max = (weight_cap - 1) / 2;
  p.x_degree_max = 0;
  p.aux_order = 0;
  p.hbar_min = 0;
  p.hbar_max = weight_cap / 2;
  p.tsmall_index_max = 0;
  p.tsmall_sum_max = 0;
  p.todd_weight_max = weight_cap;
  p.nu_max = weight_cap;
  VarSet v;
  v.todd = v.nu = v.hbar2 = true;
  return ring_new(p, v);
}

Series gbgw_cut_and_join_apply(const Series& s) {
  const RingPtr& ring = s.ring();
  if (ring->todd_end() == ring->todd_begin() || !ring->active().nu ||
      !ring->active().hbar2)
    throw std::invalid_argument("cut_and_join: ring needs T, nu, hbar2");
  const int idx = todd_index_max(ring);
  Series out = Series::zero(ring);
  // Join part: two T's against one derivative.
  for (int c = 0; c <= idx; ++c) {
    Series d = s.derive(var_T(c));
    if (d.is_zero()) continue;
    for (int a = 0; a <= c; ++a) {
      int b = c - a;
      Rational coef = double_factorial(2 * c + 1) /
                      (double_factorial(2 * a - 1) * double_factorial(2 * b - 1));
      if (a != b) coef *= 2;  // (a,b) and (b,a) give equal contributions
      if (a < b) continue;
      Monomial m(ring->slots(), 0);
      ++m[ring->todd_begin() + a];
      ++m[ring->todd_begin() + b];
      out = out.add(d.shift(m, coef));
    }
  }
  // Cut part: one T against two derivatives, with an hbar^2.
  for (int a = 0; a <= idx; ++a) {
    Series da = s.derive(var_T(a));
    if (da.is_zero()) continue;
    for (int b = a; a + b + 1 <= idx; ++b) {
      Series dab = da.derive(var_T(b));
      if (dab.is_zero()) continue;
      Rational coef = double_factorial(2 * a + 1) * double_factorial(2 * b + 1) /
                      double_factorial(2 * (a + b) + 1);
      Rational w = (a == b) ? coef / 2 : coef;
      Monomial m(ring->slots(), 0);
      ++m[ring->todd_begin() + a + b + 1];
      m[ring->hbar_slot()] = 1;
      out = out.add(dab.shift(m, w));
    }
  }
  // Linear part (1/8 - nu/2) T_1.
  {
    Monomial m(ring->slots(), 0);
    ++m[ring->todd_begin()];
    out = out.add(s.shift(m, Rational(1, 8)));
    m[ring->nu_slot()] = 1;
    out = out.add(s.shift(m, Rational(-1, 2)));
  }
  return out;
}

Series gbgw_virasoro_apply(int m, const Series& s) {
  if (m < 0) throw std::invalid_argument("gbgw_virasoro_apply: m >= 0");
  const RingPtr& ring = s.ring();
  const int idx = todd_index_max(ring);
  Series out = Series::zero(ring);
  const Rational pre = 1 / pow2(2 * m + 1);
  for (int a = 0; a + m <= idx; ++a) {
    Series d = s.derive(var_T(a + m));
    if (d.is_zero()) continue;
    Rational c =
        pre * double_factorial(2 * a + 2 * m + 1) / double_factorial(2 * a - 1);
    Monomial mm(ring->slots(), 0);
    ++mm[ring->todd_begin() + a];
    out = out.add(d.shift(mm, c));
    if (a == 0) out = out.sub(d.scale(c));
  }
  if (m >= 1) {
    const Rational qpre = 1 / pow2(2 * m + 2);
    for (int a = 0; a <= m - 1; ++a) {
      int b = m - 1 - a;
      if (a > idx || b > idx) continue;
      Series dab = s.derive(var_T(a)).derive(var_T(b));
      if (dab.is_zero()) continue;
      Monomial mm(ring->slots(), 0);
      mm[ring->hbar_slot()] = 1;
      out = out.add(dab.shift(
          mm,
          qpre * double_factorial(2 * a + 1) * double_factorial(2 * b + 1)));
    }
  } else {
    out = out.add(s.scale(Rational(1, 16)));
    Monomial mm(ring->slots(), 0);
    mm[ring->nu_slot()] = 1;
    out = out.add(s.shift(mm, Rational(-1, 4)));
  }
  return out;
}

GbgwEngine::GbgwEngine(int weight_cap)
    : cap_(weight_cap),
      ring_(gbgw_working_ring(weight_cap)),
      z_(Series::one(ring_)) {
  zk_.push_back(z_);
  for (int k = 1; k <= cap_; ++k) {
    Series next = gbgw_cut_and_join_apply(zk_.back()).scale(Rational(1, k));
    if (next.is_zero()) break;
    zk_.push_back(next);
    z_ = z_.add(next);
  }
}

const Series& GbgwEngine::free_energy() const {
  if (!f_) f_ = z_.log_series();
  return *f_;
}

Rational GbgwEngine::correlator_c(int g, const Partition& a) const {
  if (g < 0) throw std::invalid_argument("correlator_c: negative genus");
  Partition s = sorted_partition(a);
  if (!s.empty() && s.front() < 0)
    throw std::invalid_argument("correlator_c: negative index");
  long total = 0;
  int weight = 0;
  for (int v : s) {
    total += v;
    weight += 2 * v + 1;
  }
  int p = static_cast<int>(total) - g + 1;
  if (p < 0) return 0;  // correlators vanish below the anti-diagonal
  if (weight > cap_)
    throw std::out_of_range("correlator_c: monomial beyond working cap");
  Monomial m(ring_->slots(), 0);
  for (int v : s) ++m[ring_->todd_begin() + v];
  m[ring_->nu_slot()] = static_cast<std::int16_t>(p);
  m[ring_->hbar_slot()] = static_cast<std::int16_t>(total);
  return free_energy().coeff(m) * aut_factor(s) / neg2_pow(p);
}

Series gbgw_B_series(const RingPtr& ring) {
  if (!ring->active().x || !ring->active().hbar2)
    throw std::invalid_argument("gbgw_B_series: ring needs X and hbar2");
  Series L = log_neg_half_x(ring);
  Series x1 = x_series(ring);
  Series x2 = x1.mul(x1);
  Monomial down(ring->slots(), 0);
  down[ring->hbar_slot()] = -1;
  Series out = x2.mul(L)
                   .scale(Rational(1, 4))
                   .sub(x2.scale(Rational(3, 8)))
                   .shift(down, Rational(1));
  out = out.add(L.scale(Rational(1, 12)));
  for (int g = 2; g - 1 <= ring->hbar_max(); ++g) {
    Rational c = bernoulli(2 * g) * pow2(g - 1) / (2 * g * (2 * g - 2));
    if (g % 2 == 1) c = -c;
    Monomial up(ring->slots(), 0);
    up[ring->hbar_slot()] = static_cast<std::int16_t>(g - 1);
    out = out.add(x_power(ring, 2 - 2 * g).shift(up, c));
  }
  return out;
}

Series gbgw_free_energy_x(const RingPtr& ring, const GbgwEngine& engine) {
  if (!ring->active().x || !ring->active().hbar2 ||
      ring->todd_end() == ring->todd_begin())
    throw std::invalid_argument("gbgw_free_energy_x: ring needs X, hbar2, T");
  const TruncationPolicy& tp = ring->policy();
  int wmax = tp.todd_weight_max == TruncationPolicy::kAuto
                 ? TruncationPolicy::kUnbounded
                 : tp.todd_weight_max;
  int capacity = std::min(wmax, tp.t_count_max * (2 * tp.t_index_max + 1));
  if (capacity > engine.weight_cap())
    throw std::invalid_argument(
        "gbgw_free_energy_x: target T box exceeds the engine cap");
  // Shrink the T box to the target's before substituting, so that every
  // T variable carried over exists in the target ring.
  TruncationPolicy q = engine.ring()->policy();
  q.t_count_max = tp.t_count_max;
  q.t_index_max = tp.t_index_max;
  q.todd_weight_max = tp.todd_weight_max;
  Series f = engine.free_energy().restrict_to(
      ring_new(q, engine.ring()->active()));
  // The untouched part of a term carries hbar^{2|a|} and the nu image brings
  // hbar^{-2p}; widen the hbar window for the fold, then project back.
  TruncationPolicy wide = tp;
  int amax = (capacity - 1) / 2;
  wide.hbar_min = std::min(tp.hbar_min, -(amax + 1));
  wide.hbar_max = std::max(tp.hbar_max, amax);
  auto wide_ring = ring_new(wide, ring->active());
  Series x1 = x_series(wide_ring);
  Monomial down(wide_ring->slots(), 0);
  down[wide_ring->hbar_slot()] = -1;
  Series nu_image = x1.mul(x1).scale(Rational(-1, 2)).shift(down, Rational(1));
  std::map<VarId, Series> assign;
  assign.emplace(var_nu(), nu_image);
  return gbgw_B_series(ring).add(
      f.substitute(wide_ring, assign).restrict_to(ring));
}

}  // namespace hbgw
