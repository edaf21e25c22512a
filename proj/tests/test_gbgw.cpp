#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "hbgw/gbgw.hpp"

using namespace hbgw;

namespace {

int todd_weight(const RingPtr& ring, const Monomial& m) {
  int w = 0;
  for (int s = ring->todd_begin(); s < ring->todd_end(); ++s)
    w += (2 * (s - ring->todd_begin()) + 1) * m[s];
  return w;
}

Monomial t1_pow(const RingPtr& ring, int k, int nu, int h) {
  Monomial m(ring->slots(), 0);
  m[ring->todd_begin()] = static_cast<std::int16_t>(k);
  if (nu != 0) m[ring->nu_slot()] = static_cast<std::int16_t>(nu);
  if (h != 0) m[ring->hbar_slot()] = static_cast<std::int16_t>(h);
  return m;
}

}  // namespace

TEST_CASE("cut-and-join on simple inputs") {
  auto ring = gbgw_working_ring(7);
  Series one = Series::one(ring);
  Series w1 = gbgw_cut_and_join_apply(one);
  // (1/8 - nu/2) T_1
  CHECK(w1.coeff(t1_pow(ring, 1, 0, 0)) == Rational(1, 8));
  CHECK(w1.coeff(t1_pow(ring, 1, 1, 0)) == Rational(-1, 2));
  CHECK(w1.size() == 2);

  Series w2 = gbgw_cut_and_join_apply(Series::variable(ring, var_T(0)));
  // T_1^2 from the join plus (1/8 - nu/2) T_1^2.
  CHECK(w2.coeff(t1_pow(ring, 2, 0, 0)) == Rational(9, 8));
  CHECK(w2.coeff(t1_pow(ring, 2, 1, 0)) == Rational(-1, 2));
  CHECK(w2.size() == 2);

  // T_3 hbar^2 in the third iterate carries (1/8-nu/2)(9/8-nu/2)/6.
  GbgwEngine eng(7);
  const Series& z3 = eng.iterates()[3];
  auto t3 = [&](int nu) {
    Monomial m(ring->slots(), 0);
    ++m[ring->todd_begin() + 1];
    m[ring->hbar_slot()] = 1;
    m[ring->nu_slot()] = static_cast<std::int16_t>(nu);
    return m;
  };
  CHECK(z3.coeff(t3(0)) == Rational(3, 128));
  CHECK(z3.coeff(t3(1)) == Rational(-5, 48));
  CHECK(z3.coeff(t3(2)) == Rational(1, 24));
}

TEST_CASE("iterates are weight homogeneous") {
  GbgwEngine eng(9);
  const auto& zk = eng.iterates();
  REQUIRE(static_cast<int>(zk.size()) == 10);
  for (int k = 0; k < static_cast<int>(zk.size()); ++k)
    for (const auto& [m, c] : zk[k].terms()) {
      CHECK(todd_weight(eng.ring(), m) == k);
      (void)c;
    }
}

TEST_CASE("the operator raises the weight of random homogeneous inputs by one") {
  auto ring = gbgw_working_ring(9);
  std::mt19937 rng(20240813);
  for (int iter = 0; iter < 110; ++iter) {
    int w = static_cast<int>(rng() % 9);
    Series s = Series::zero(ring);
    int nt = 1 + static_cast<int>(rng() % 3);
    for (int t = 0; t < nt; ++t) {
      Monomial m(ring->slots(), 0);
      int rem = w;
      while (rem > 0) {
        int maxa = std::min(4, (rem - 1) / 2);
        int a = maxa == 0 ? 0 : static_cast<int>(rng() % (maxa + 1));
        ++m[ring->todd_begin() + a];
        rem -= 2 * a + 1;
      }
      m[ring->nu_slot()] = static_cast<std::int16_t>(rng() % 3);
      m[ring->hbar_slot()] = static_cast<std::int16_t>(rng() % 2);
      int c = static_cast<int>(rng() % 17) - 8;
      if (c == 0) c = 3;
      s = s.add(Series::term(ring, m, rat(c, 1 + static_cast<int>(rng() % 5))));
    }
    Series img = gbgw_cut_and_join_apply(s);
    for (const auto& [m, c] : img.terms()) {
      CHECK(todd_weight(ring, m) == w + 1);
      (void)c;
    }
  }
}

TEST_CASE("single-time sector of the free energy") {
  GbgwEngine eng(9);
  const auto& ring = eng.ring();
  const Series& f = eng.free_energy();
  // F restricted to T_1 is -(1/8 - nu/2) log(1 - T_1): no hbar, nu-linear.
  for (int k = 1; k <= 9; ++k) {
    CHECK(f.coeff(t1_pow(ring, k, 0, 0)) == rat(1, 8 * k));
    CHECK(f.coeff(t1_pow(ring, k, 1, 0)) == rat(-1, 2 * k));
    if (k >= 2) CHECK(f.coeff(t1_pow(ring, k, 2, 0)) == 0);
    CHECK(f.coeff(t1_pow(ring, k, 0, 2)) == 0);
  }
  // Second T_1-derivative matches the known sector value
  // (1/8 - nu/2)/(1-T_1)^2 of the associated tau function.
  Series u = f.derive(var_T(0)).derive(var_T(0));
  for (int k = 0; k <= 7; ++k) {
    CHECK(u.coeff(t1_pow(ring, k, 0, 0)) == rat(k + 1, 8));
    CHECK(u.coeff(t1_pow(ring, k, 1, 0)) == rat(-(k + 1), 2));
  }
}

TEST_CASE("correlator spot values") {
  GbgwEngine eng(9);
  CHECK(eng.correlator_c(0, {0}) == Rational(1, 4));
  CHECK(eng.correlator_c(1, {0}) == Rational(1, 8));
  CHECK(eng.correlator_c(2, {0}) == 0);
  CHECK(eng.correlator_c(0, {1}) == Rational(1, 96));
  CHECK(eng.correlator_c(1, {1}) == Rational(5, 96));
  CHECK(eng.correlator_c(2, {1}) == Rational(3, 128));
  CHECK(eng.correlator_c(3, {1}) == 0);
  CHECK(eng.correlator_c(0, {2}) == Rational(1, 1920));
  CHECK(eng.correlator_c(2, {0, 0}) == 0);
  CHECK_THROWS_AS((void)eng.correlator_c(0, {5}), std::out_of_range);
}

TEST_CASE("Virasoro operators annihilate the partition function") {
  const int cap = 9;
  GbgwEngine eng(cap);
  const auto& ring = eng.ring();
  for (int m = 0; m <= 3; ++m) {
    Series r = gbgw_virasoro_apply(m, eng.partition_function());
    int bad = 0;
    for (const auto& [mm, c] : r.terms()) {
      if (todd_weight(ring, mm) > cap - 2 * m - 1) continue;
      (void)c;
      ++bad;
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("Virasoro commutators close") {
  auto ring = gbgw_working_ring(13);
  Series s = Series::variable(ring, var_T(0))
                 .scale(Rational(1, 8))
                 .add(Series::variable(ring, var_T(1))
                          .mul(Series::variable(ring, var_nu())))
                 .sub(Series::variable(ring, var_T(2)).scale(Rational(2, 3)));
  Monomial hm(ring->slots(), 0);
  hm[ring->hbar_slot()] = 1;
  s = s.add(Series::variable(ring, var_T(0))
                .mul(Series::variable(ring, var_T(1)))
                .shift(hm, Rational(3, 5)));
  for (int m = 0; m <= 2; ++m) {
    for (int n = m + 1; n <= 2; ++n) {
      Series lhs = gbgw_virasoro_apply(m, gbgw_virasoro_apply(n, s))
                       .sub(gbgw_virasoro_apply(n, gbgw_virasoro_apply(m, s)));
      Series rhs = gbgw_virasoro_apply(m + n, s).scale(m - n);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("constant part of the free energy in the x variable") {
  TruncationPolicy p;
  p.genus_max = 3;
  p.t_count_max = 1;
  p.t_index_max = 0;
  p.todd_weight_max = 1;
  p.x_degree_max = 8;
  p.hbar_min = -1;
  p.hbar_max = 2;
  p.tsmall_index_max = 0;
  p.tsmall_sum_max = 0;
  p.nu_max = 0;
  p.aux_order = 0;
  VarSet v;
  v.x = v.hbar2 = v.todd = true;
  auto ring = ring_new(p, v);
  Series B = gbgw_B_series(ring);
  Series L = log_neg_half_x(ring);
  Series x2 = x_series(ring).mul(x_series(ring));
  Monomial down(ring->slots(), 0);
  down[ring->hbar_slot()] = -1;
  CHECK(B.hbar_part(-1) == x2.mul(L)
                               .scale(Rational(1, 4))
                               .sub(x2.scale(Rational(3, 8)))
                               .shift(down, Rational(1)));
  CHECK(B.hbar_part(0) == L.scale(Rational(1, 12)));
  // g = 2: 2 B_4/(4*2) x^{-2} hbar^2 = -x^{-2} hbar^2/120.
  Monomial up(ring->slots(), 0);
  up[ring->hbar_slot()] = 1;
  CHECK(B.hbar_part(1) == x_power(ring, -2).shift(up, Rational(-1, 120)));
}

TEST_CASE("degree counting across the full free energy") {
  TruncationPolicy p;
  p.genus_max = 3;
  p.t_count_max = 2;
  p.t_index_max = 1;
  p.todd_weight_max = 6;
  p.x_degree_max = 9;
  p.hbar_min = -2;
  p.hbar_max = 1;
  p.tsmall_index_max = 0;
  p.tsmall_sum_max = 0;
  p.nu_max = 0;
  p.aux_order = 0;
  VarSet v;
  v.x = v.hbar2 = v.todd = true;
  auto ring = ring_new(p, v);
  GbgwEngine eng(6);
  Series F = gbgw_free_energy_x(ring, eng);

  // Genus-wise scaling: -x dF_g/dx + sum_a 2a Ttilde_{2a+1} dF_g/dT_{2a+1}
  // equals (2g-2) F_g - (x^2/4) delta_{g,0} - (1/12) delta_{g,1}.
  for (int g = 0; g <= 2; ++g) {
    Series Fg = F.hbar_part(g - 1);
    Series lhs = x_series(ring).mul(Fg.derive(var_x())).scale(-1);
    lhs = lhs.add(
        Series::variable(ring, var_T(1)).mul(Fg.derive(var_T(1))).scale(2));
    Series rhs = Fg.scale(2 * g - 2);
    if (g == 0) {
      Monomial down(ring->slots(), 0);
      down[ring->hbar_slot()] = -1;
      rhs = rhs.sub(x_series(ring)
                        .mul(x_series(ring))
                        .scale(Rational(1, 4))
                        .shift(down, Rational(1)));
    }
    if (g == 1) rhs = rhs.sub(Series::one(ring).scale(Rational(1, 12)));
    Series r = lhs.sub(rhs);
    int bad = 0;
    for (const auto& [m, c] : r.terms()) {
      if (m[ring->x_slot()] <= ring->policy().x_degree_max - 1) ++bad;
      (void)c;
    }
    CHECK(bad == 0);
  }
}
