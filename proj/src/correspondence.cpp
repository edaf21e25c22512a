#include "hbgw/correspondence.hpp"

#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace hbgw {

namespace {

Rational sign_pow(int e) { return ((e % 2 + 2) % 2 == 0) ? 1 : -1; }

// T_{2a+1} as a series, or zero when the ring's T box cannot hold it.
Series todd_term(const RingPtr& ring, int a, const Rational& c) {
  int slot = ring->slot_of(var_T(a));
  if (slot < 0 || c == 0) return Series::zero(ring);
  Monomial m(ring->slots(), 0);
  m[slot] = 1;
  if (ring->fit(m) != RingContext::Fit::kOk) return Series::zero(ring);
  return Series::term(ring, m, c);
}

}  // namespace

SubstitutionRule t_sub(const RingPtr& ring, int i) {
  if (i < 0) throw std::invalid_argument("t_sub: negative index");
  Rational cst = i >= 2 ? -rational_pow(rat(-1, 2), i - 1) : Rational(0);
  Series lin = Series::zero(ring);
  if (i == 0) lin = Series::variable(ring, var_x());
  const int amax = ring->policy().t_index_max;
  for (int a = 0; a <= amax; ++a) {
    Rational w = Rational(-2) * rational_pow(rat(-(2 * a + 1), 2), i) / factorial(a);
    lin = lin.add(todd_term(ring, a, w));
  }
  return SubstitutionRule{i, cst, lin};
}

Series A_series(const RingPtr& ring) {
  const int amax = ring->policy().t_index_max;
  auto tt = [&](int a) {
    Series t = todd_term(ring, a, 1);
    if (a == 0) t = t.sub(Series::one(ring));
    return t;
  };
  Series acc = Series::zero(ring);
  for (int a = 0; a <= amax; ++a) {
    Series ta = tt(a);
    for (int b = a; b <= amax; ++b) {
      Rational c = rat(1, 2) / (factorial(a) * factorial(b) * Rational(a + b + 1));
      if (b != a) c *= 2;
      acc = acc.add(ta.mul(tt(b)).scale(c));
    }
  }
  Series x = x_series(ring);
  for (int b = 0; b <= amax; ++b)
    acc = acc.sub(x.mul(tt(b)).scale(Rational(1) / (factorial(b) * Rational(2 * b + 1))));
  return acc;
}

Series hodge_side_free_energy(const RingPtr& ring, HodgeEngine& hodge) {
  const TruncationPolicy& p = ring->policy();
  if (ring->hbar_slot() < 0 || ring->x_slot() < 0)
    throw std::invalid_argument("hodge_side_free_energy: ring needs X and hbar^2");
  int count_cap = p.t_count_max;
  if (p.todd_weight_max != TruncationPolicy::kAuto)
    count_cap = std::min(count_cap, p.todd_weight_max);
  // Every t_0 or t_1 insertion costs one unit of X-degree or T-count.
  const int D = p.x_degree_max + count_cap;
  const int g_lo = std::max(0, ring->hbar_min() + 1);
  const int g_hi = ring->hbar_max() + 1;

  std::vector<Series> rule;
  auto rule_at = [&](int i) -> const Series& {
    while (static_cast<int>(rule.size()) <= i) {
      SubstitutionRule r = t_sub(ring, static_cast<int>(rule.size()));
      rule.push_back(r.linear.add(Series::constant(ring, r.constant)));
    }
    return rule[i];
  };
  std::map<Partition, Series> prod;
  std::function<const Series&(const Partition&)> prod_at =
      [&](const Partition& I) -> const Series& {
    auto it = prod.find(I);
    if (it == prod.end()) {
      Series value = I.empty() ? Series::one(ring)
                               : prod_at(Partition(I.begin(), I.end() - 1))
                                     .mul(rule_at(I.back()));
      it = prod.emplace(I, std::move(value)).first;
    }
    return it->second;
  };

  Series total = Series::zero(ring);
  for (int g = g_lo; g <= g_hi; ++g) {
    Series hg = Series::zero(ring);
    const int n_max = 2 * D + std::max(0, 3 * g - 3);
    for (int n = 0; n <= n_max; ++n) {
      for (int s = std::max(0, n - 3); s <= 3 * g - 3 + n; ++s) {
        for (const Partition& I : partitions_fixed(n, s, s)) {
          int n01 = 0;
          bool dead = false;
          for (int v : I) {
            n01 += v <= 1;
            dead = dead || rule_at(v).is_zero();
          }
          if (n01 > D || dead) continue;
          const Rational& f = hodge.fh(g - 1, I);
          if (f == 0) continue;
          hg = hg.add(prod_at(I).scale(f));
        }
      }
    }
    if (hg.is_zero()) continue;
    Monomial m(ring->slots(), 0);
    m[ring->hbar_slot()] = static_cast<std::int16_t>(g - 1);
    total = total.add(hg.shift(m, rational_pow(Rational(-4), g - 1)));
  }
  Monomial m(ring->slots(), 0);
  m[ring->hbar_slot()] = -1;
  return total.add(A_series(ring).shift(m, 1));
}

VerificationReport verify_main(const RingPtr& ring, HodgeEngine& hodge,
                               const GbgwEngine& engine) {
  Series lhs = hodge_side_free_energy(ring, hodge);
  Series rhs = gbgw_free_energy_x(ring, engine);
  return compare_series("main", lhs, rhs);
}

Rational elsv_integral(int g, const Partition& a, int extra, HodgeEngine& hodge) {
  if (g < 0 || extra < 0) throw std::invalid_argument("elsv_integral: bad range");
  std::vector<Rational> w;
  for (int ap : a) w.push_back(rat(-(2 * ap + 1), 2));
  for (int q = 0; q < extra; ++q) w.emplace_back(0);
  const int d_max = std::max(0, 3 * g - 3 + static_cast<int>(w.size()));
  std::vector<Rational> s;
  for (int d = 1; d <= d_max; ++d)
    s.push_back(-rational_pow(rat(-1, 2), d) / Rational(d));
  const std::vector<Rational> b = kappa_b_from_s(s);
  return kappa_integral(g, w, b, [&hodge](int gg, const Partition& I) {
    return hodge.hodge_correlator(gg, I);
  });
}

Rational elsv_rhs(int g, const Partition& a, HodgeEngine& hodge) {
  const int abs = std::accumulate(a.begin(), a.end(), 0);
  const int l = static_cast<int>(a.size());
  if (abs < g - 1) throw std::invalid_argument("elsv_rhs: needs |a| >= g-1");
  const int extra = 2 * abs - 2 * g + 2;
  Rational pref = sign_pow(g - 1 + l) * rational_pow(Rational(2), 2 * g - 2 + l) / factorial(extra);
  for (int ap : a) pref /= factorial(ap);
  return pref * elsv_integral(g, a, extra, hodge);
}

namespace {

std::string correlator_name(int g, const Partition& a) {
  std::ostringstream os;
  os << "c_" << g << "(";
  for (std::size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
  os << ")";
  return os.str();
}

}  // namespace

VerificationReport verify_elsv(int g_max, int total_max, int len_max,
                               const GbgwEngine& engine, HodgeEngine& hodge) {
  VerificationReport r;
  r.name = "elsv";
  {
    std::ostringstream os;
    os << "g<=" << g_max << " |a|<=" << total_max << " len<=" << len_max;
    r.policy = os.str();
  }
  for (int g = 0; g <= g_max; ++g)
    for (int l = 1; l <= len_max; ++l)
      for (int tot = std::max(0, g - 1); tot <= total_max; ++tot)
        for (const Partition& a : partitions_fixed(l, tot, tot))
          r.check(correlator_name(g, a), engine.correlator_c(g, a),
                  elsv_rhs(g, a, hodge));
  // Powers of x+2 beyond 2|a|-2g+2 carry no intersection numbers; for
  // |a| < g-1 every power vanishes.
  const struct {
    int g;
    Partition a;
    int extra;
  } vanish[] = {{1, {0}, 1}, {1, {0}, 2}, {1, {1}, 3},
                {2, {1}, 1}, {2, {0}, 0}, {2, {0}, 1}};
  for (const auto& v : vanish)
    r.check(correlator_name(v.g, v.a) + " tail@" + std::to_string(v.extra),
            elsv_integral(v.g, v.a, v.extra, hodge), 0);
  return r;
}

Rational elsv_constant_target(int g) {
  if (g < 2) throw std::invalid_argument("elsv_constant_target: needs g >= 2");
  return -bernoulli(2 * g) /
         (Rational(2 * g) * Rational(2 * g - 2) * rational_pow(Rational(8), g - 1));
}

VerificationReport elsv_constant(int g, HodgeEngine& hodge) {
  VerificationReport r;
  r.name = "elsv-const";
  r.policy = "g=" + std::to_string(g);
  r.check("vacuum g=" + std::to_string(g), elsv_integral(g, {}, 0, hodge),
          elsv_constant_target(g));
  return r;
}

}  // namespace hbgw
