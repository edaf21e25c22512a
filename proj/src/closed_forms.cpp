#include "hbgw/closed_forms.hpp"

#include <stdexcept>

#include "hbgw/hodge.hpp"
#include "hbgw/partitions.hpp"

namespace hbgw {

namespace {

Series q_rhs(const RingPtr& ring, const Series& q) {
  Series next = x_series(ring).scale(rat(-1, 2));
  for (int a = 0; a <= ring->policy().t_index_max; ++a)
    next = next.add(Series::variable(ring, var_T(a))
                        .mul(q.pow(2 * a + 1))
                        .scale(Rational(1) / factorial(a)));
  return next;
}

// Normalized policy for the x/T frame: odd-time weight bound synced to the
// count box, hbar floor -1, psi-side boxes disabled.
TruncationPolicy xt_policy(TruncationPolicy p, int hbar_max) {
  p.hbar_min = -1;
  p.hbar_max = hbar_max;
  p.todd_weight_max = p.t_count_max * (2 * p.t_index_max + 1);
  p.tsmall_index_max = 0;
  p.tsmall_sum_max = 0;
  p.nu_max = 0;
  return p;
}

RingPtr xt_ring(const TruncationPolicy& p, bool with_hbar) {
  VarSet v;
  v.x = v.todd = true;
  v.hbar2 = with_hbar;
  return ring_new(p, v);
}

}  // namespace

QData solve_q(const RingPtr& ring) {
  if (ring->x_slot() < 0 || ring->todd_end() == ring->todd_begin())
    throw std::invalid_argument("solve_q: ring needs X and T");
  Series q = x_series(ring).scale(rat(-1, 2));
  for (int pass = 0; pass <= ring->policy().t_count_max; ++pass)
    q = q_rhs(ring, q);
  Series y = q.mul(q);
  Series u = q.log_series().scale(-2);
  return QData{q, y, u};
}

Series q_equation_residual(const QData& qd) {
  return qd.q.sub(q_rhs(qd.q.ring(), qd.q));
}

Series q_flow_residual(const QData& qd, int a) {
  return qd.q.derive(var_T(a)).add(qd.q.pow(2 * a + 1)
                                       .mul(qd.q.derive(var_x()))
                                       .scale(Rational(2) / factorial(a)));
}

Series y_flow_residual(const QData& qd, int a) {
  return qd.y.derive(var_T(a)).sub(
      qd.y.pow(a).mul(qd.y.derive(var_T(0))).scale(Rational(1) / factorial(a)));
}

Series f0_closed(const QData& qd) {
  const RingPtr& ring = qd.q.ring();
  const int amax = ring->policy().t_index_max;
  auto tt = [&](int a) {
    Series t = Series::variable(ring, var_T(a));
    if (a == 0) t = t.sub(Series::one(ring));
    return t;
  };
  Series acc = Series::zero(ring);
  for (int a = 0; a <= amax; ++a) {
    Series ta = tt(a);
    for (int b = a; b <= amax; ++b) {
      Rational c = rat(1, 2) / (factorial(a) * factorial(b) * Rational(a + b + 1));
      if (b != a) c *= 2;
      acc = acc.add(ta.mul(tt(b)).mul(qd.q.pow(2 * (a + b + 1))).scale(c));
    }
  }
  Series x = x_series(ring);
  for (int b = 0; b <= amax; ++b)
    acc = acc.sub(x.mul(tt(b))
                      .mul(qd.q.pow(2 * b + 1))
                      .scale(Rational(1) / (factorial(b) * Rational(2 * b + 1))));
  return acc.add(x.mul(x).mul(qd.q.log_series()).scale(rat(1, 4)));
}

Series f0_alexandrov(const RingPtr& ring) {
  const TruncationPolicy& p = ring->policy();
  Series x2 = x_series(ring).mul(x_series(ring));
  Series one_m_t1 = Series::one(ring).sub(Series::variable(ring, var_T(0)));
  Series acc = x2.mul(log_neg_half_x(ring)).scale(rat(1, 4));
  acc = acc.sub(x2.scale(rat(3, 8)));
  acc = acc.sub(x2.mul(one_m_t1.log_series()).scale(rat(1, 4)));
  if (p.t_index_max == 0) return acc;
  Series inv1 = one_m_t1.inverse();
  const int kmax = p.t_index_max * p.t_count_max;
  for (int k = 1; k <= kmax; ++k) {
    for (int n = 1; n <= std::min(k, p.t_count_max); ++n) {
      for (const Partition& base : partitions_fixed(n, k - n, p.t_index_max - 1)) {
        int m = 0;
        for (int v : base) m += 2 * (v + 1) + 1;
        Rational c = factorial(m - 1) /
                     (rational_pow(2, 2 * k + 1) * factorial(2 * k + 2));
        Series term = inv1.pow(m).mul(x_power(ring, 2 * k + 2));
        std::size_t pos = 0;
        while (pos < base.size()) {
          int i = base[pos] + 1;
          int j = 0;
          while (pos < base.size() && base[pos] + 1 == i) {
            ++j;
            ++pos;
          }
          c /= rational_pow(factorial(i), j) * factorial(j);
          term = term.mul(Series::variable(ring, var_T(i)).pow(j));
        }
        acc = acc.add(term.scale(c));
      }
    }
  }
  return acc;
}

Series f1_u_jet(const QData& qd) {
  return qd.u.derive(var_x()).log_series().scale(rat(1, 24)).sub(
      qd.u.scale(rat(1, 16)));
}

Series f1_y_jet(const QData& qd) {
  return qd.y.derive(var_T(0)).scale(rat(1, 2)).log_series().scale(rat(1, 24));
}

Series iz_variable(const QData& qd, int k) {
  if (k < 1) throw std::invalid_argument("iz_variable: k >= 1");
  const RingPtr& ring = qd.q.ring();
  Rational c = Rational(k % 2 == 0 ? -1 : 1) * double_factorial(2 * k - 1) /
               rational_pow(2, k + 1);
  Series acc = x_series(ring).mul(qd.q.inverse().pow(2 * k + 1)).scale(c);
  if (k == 1) acc = acc.add(Series::one(ring));
  for (int a = 0; a + k <= ring->policy().t_index_max; ++a)
    acc = acc.add(Series::variable(ring, var_T(a + k))
                      .mul(qd.q.pow(2 * a))
                      .scale(Rational(1) / factorial(a)));
  return acc;
}

Series iz_free_energy(const QData& qd, int g, WkTable& wk) {
  const RingPtr& ring = qd.q.ring();
  Series e = Series::one(ring).sub(iz_variable(qd, 1)).inverse();
  if (g == 1) return e.scale(rat(1, 2)).log_series().scale(rat(1, 24));
  if (g != 2) throw std::invalid_argument("iz_free_energy: g is 1 or 2");
  Series t2 = iz_variable(qd, 2).mul(e);
  Series t3 = iz_variable(qd, 3).mul(e);
  Series t4 = iz_variable(qd, 4).mul(e);
  Series f = t4.scale(wk.correlator(2, {4}));
  f = f.add(t2.mul(t3).scale(wk.correlator(2, {2, 3})));
  f = f.add(t2.pow(3).scale(wk.correlator(2, {2, 2, 2}) / 6));
  return e.pow(2).mul(f);
}

VerificationReport verify_f0(const TruncationPolicy& policy,
                             const GbgwEngine& engine) {
  TruncationPolicy p = xt_policy(policy, 0);
  auto rh = xt_ring(p, true);
  auto rt = xt_ring(p, false);
  Series caj = gbgw_free_energy_x(rh, engine).hbar_slice(-1, rt);
  QData qd = solve_q(rt);
  VerificationReport r = compare_series("f0", f0_closed(qd), caj);
  r.merge(compare_series("f0", f0_alexandrov(rt), caj));
  r.policy = policy_text(policy);
  return r;
}

VerificationReport verify_f1(const TruncationPolicy& policy,
                             const GbgwEngine& engine) {
  TruncationPolicy p = xt_policy(policy, 0);
  auto rh = xt_ring(p, true);
  auto rt = xt_ring(p, false);
  Series caj = gbgw_free_energy_x(rh, engine).hbar_slice(0, rt);
  TruncationPolicy wide = p;
  wide.x_degree_max += 1;
  wide.t_count_max += 1;
  wide.todd_weight_max = wide.t_count_max * (2 * wide.t_index_max + 1);
  QData qd = solve_q(xt_ring(wide, false));
  VerificationReport r =
      compare_series("f1", f1_u_jet(qd).restrict_to(rt), caj);
  r.merge(compare_series("f1", f1_y_jet(qd).restrict_to(rt), caj));
  r.policy = policy_text(policy);
  return r;
}

VerificationReport verify_iz(const TruncationPolicy& policy,
                             const GbgwEngine& engine, WkTable& wk) {
  TruncationPolicy p = xt_policy(policy, 1);
  auto rh = xt_ring(p, true);
  auto rt = xt_ring(p, false);
  Series f = gbgw_free_energy_x(rh, engine);
  QData qd = solve_q(rt);
  VerificationReport r = compare_series(
      "iz", iz_free_energy(qd, 1, wk), f.hbar_slice(0, rt));
  r.merge(compare_series("iz", iz_free_energy(qd, 2, wk),
                         f.hbar_slice(1, rt)));
  r.policy = policy_text(policy);
  return r;
}

VerificationReport kw_bernoulli_check(int g, WkTable& wk) {
  if (g < 2) throw std::invalid_argument("kw_bernoulli_check: g >= 2");
  const int dmax = 3 * g - 3;
  std::vector<Rational> a(dmax + 1);
  a[0] = 1;
  for (int d = 1; d <= dmax; ++d)
    a[d] = Rational(d % 2 == 0 ? 1 : -1) * double_factorial(2 * d + 1);
  std::vector<Rational> c(dmax + 1);
  for (int n = 1; n <= dmax; ++n) {
    c[n] = a[n];
    for (int k = 1; k < n; ++k) c[n] -= Rational(k) * c[k] * a[n - k] / n;
  }
  std::vector<Rational> sbar(dmax);
  for (int d = 1; d <= dmax; ++d) sbar[d - 1] = -c[d];
  std::vector<Rational> b = kappa_b_from_s(sbar);
  Rational val = kappa_integral(
      g, {}, b,
      [&wk](int gg, const Partition& I) -> Rational {
        return wk.correlator(gg, I);
      });
  Rational target = Rational(g % 2 == 0 ? 1 : -1) * bernoulli(2 * g) /
                    (Rational(2 * g) * Rational(2 * g - 2));
  VerificationReport r;
  r.name = "kw-bernoulli";
  r.policy = "g=" + std::to_string(g);
  r.check("vacuum g=" + std::to_string(g), val, target);
  return r;
}

}  // namespace hbgw
