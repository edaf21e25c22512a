#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "hbgw/pdo.hpp"

using namespace hbgw;

namespace {

RingPtr todd_ring(int count, int idx, int weight, int hbar_top) {
  TruncationPolicy p;
  p.genus_max = hbar_top + 1;
  p.t_count_max = count;
  p.t_index_max = idx;
  p.x_degree_max = 0;
  p.aux_order = 0;
  p.hbar_min = 0;
  p.hbar_max = hbar_top;
  p.tsmall_sum_max = 0;
  p.tsmall_index_max = 0;
  p.todd_weight_max = weight;
  p.nu_max = 0;
  VarSet vars{.hbar2 = hbar_top > 0, .todd = true};
  return ring_new(p, vars);
}

const GbgwEngine& engine8() {
  static GbgwEngine e(8);
  return e;
}

bool symbols_match(const Pdo& p, const Pdo& q, int from) {
  std::set<int> keys;
  for (const auto& [k, s] : p.sym)
    if (k >= from) keys.insert(k);
  for (const auto& [k, s] : q.sym)
    if (k >= from) keys.insert(k);
  for (int k : keys) {
    Series ps = p.sym.count(k) ? p.sym.at(k) : Series::zero(p.ring);
    Series qs = q.sym.count(k) ? q.sym.at(k) : Series::zero(q.ring);
    if (!(ps == qs)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("composition follows the Leibniz expansion") {
  RingPtr r = todd_ring(4, 1, 8, 0);
  Series f = Series::variable(r, var_T(0)).pow(2).add(Series::variable(r, var_T(1)));
  Series f1 = f.derive(var_T(0));
  Series f2 = f1.derive(var_T(0));
  Pdo d = pdo_monomial(Series::one(r), 1, var_T(0), -4);
  Pdo dinv = pdo_monomial(Series::one(r), -1, var_T(0), -4);
  Pdo mf = pdo_monomial(f, 0, var_T(0), -4);

  Pdo df = pdo_mul(d, mf);
  CHECK(df.sym.at(1) == f);
  CHECK(df.sym.at(0) == f1);
  CHECK(pdo_mul(mf, d).sym.size() == 1);
  CHECK(pdo_commutator(d, mf).sym.at(0) == f1);

  Pdo dinvf = pdo_mul(dinv, mf);
  CHECK(dinvf.sym.at(-1) == f);
  CHECK(dinvf.sym.at(-2) == f1.scale(-1));
  CHECK(dinvf.sym.at(-3) == f2);
  CHECK(dinvf.sym.count(-4) == 0);

  CHECK(pdo_mul(d, dinv).sym.at(0) == Series::one(r));
  CHECK(pdo_mul(dinv, d).sym.at(0) == Series::one(r));
  CHECK(pdo_mul(d, dinv).sym.size() == 1);

  Pdo other = pdo_monomial(f, 0, var_T(0), -6);
  CHECK_THROWS_AS(pdo_mul(d, other), std::invalid_argument);
}

TEST_CASE("square root of the Lax operator") {
  RingPtr r = todd_ring(4, 1, 8, 0);
  Series u = Series::variable(r, var_T(0)).pow(2).add(Series::variable(r, var_T(1)));
  Series u1 = u.derive(var_T(0));
  Pdo lax = pdo_lax(u, var_T(0), -5);
  Pdo root = pdo_sqrt_lax(u, var_T(0), -5);

  CHECK(root.sym.at(1) == Series::one(r));
  CHECK(root.sym.count(0) == 0);
  CHECK(root.sym.at(-1) == u);
  CHECK(root.sym.at(-2) == u1.scale(rat(-1, 2)));

  Pdo err = pdo_sub(lax, pdo_mul(root, root));
  for (const auto& [k, s] : err.sym) CHECK(k <= -5);

  Pdo p = pdo_plus_part(pdo_mul(lax, root));
  CHECK(p.sym.size() == 3);
  CHECK(p.sym.at(3) == Series::one(r));
  CHECK(p.sym.at(1) == u.scale(3));
  CHECK(p.sym.at(0) == u1.scale(rat(3, 2)));

  Pdo c = pdo_commutator(p, lax);
  CHECK(c.sym.size() == 1);
  CHECK(c.sym.at(0) == u.mul(u1).scale(6).add(u.derive(var_T(0)).derive(var_T(0)).derive(var_T(0)).scale(rat(1, 2))));
}

TEST_CASE("flow right-hand sides at depths zero, one and two") {
  RingPtr r = todd_ring(4, 1, 8, 2);
  Series u = Series::variable(r, var_T(0)).pow(2).add(Series::variable(r, var_T(1)));
  Series u1 = u.derive(var_T(0));
  Series u3 = u1.derive(var_T(0)).derive(var_T(0));

  CHECK(kdv_flow_rhs(u, var_T(0), 0) == u1);

  Monomial sh(r->slots(), 0);
  sh[r->hbar_slot()] = 1;
  Series expect = u3.scale(rat(1, 12)).add(u.mul(u1)).shift(sh, 1);
  CHECK(kdv_flow_rhs(u, var_T(0), 1) == expect);

  CHECK_FALSE(kdv_flow_rhs(u, var_T(0), 2).is_zero());

  RingPtr bare = todd_ring(4, 1, 8, 0);
  Series ub = Series::variable(bare, var_T(0));
  CHECK_THROWS_AS(kdv_flow_rhs(ub, var_T(0), 1), std::invalid_argument);
  CHECK_THROWS_AS(kdv_flow_rhs(ub, var_T(0), -1), std::invalid_argument);
}

TEST_CASE("psi-side flows match the correlator table") {
  WkTable wk;
  VerificationReport r0 = verify_kdv_flow_wk(0, 3, 4, 6, wk);
  CHECK(r0.pass());
  CHECK(r0.checked > 20);
  VerificationReport r1 = verify_kdv_flow_wk(1, 3, 4, 6, wk);
  CHECK(r1.pass());
  CHECK(r1.checked > 20);
}

TEST_CASE("a poisoned correlator breaks the psi-side flow") {
  WkTable wk;
  wk.poison(0, {0, 0, 0}, 999);
  CHECK_FALSE(verify_kdv_flow_wk(1, 3, 3, 5, wk).pass());
}

TEST_CASE("exponential-side flows match the cut-and-join slice") {
  VerificationReport r0 = verify_kdv_flow_gbgw(0, engine8());
  CHECK(r0.pass());
  CHECK(r0.checked > 10);
  VerificationReport r1 = verify_kdv_flow_gbgw(1, engine8());
  CHECK(r1.pass());
  CHECK(r1.checked > 10);
}

TEST_CASE("initial data in the T1 sector") {
  VerificationReport r = verify_tau_initial(engine8());
  CHECK(r.pass());
  CHECK(r.checked >= 14);
}

TEST_CASE("operator composition is associative") {
  // The box holds every product of three coefficient factors, so only the
  // symbol floor truncates.
  RingPtr ring = todd_ring(15, 1, 15, 0);
  std::mt19937 rng(20240817);
  std::uniform_int_distribution<int> nterm(1, 2), e1(0, 2), e3(0, 1);
  std::uniform_int_distribution<int> num(-3, 3), den(1, 3), ord(-2, 2);
  auto rnd_series = [&]() {
    Series s = Series::zero(ring);
    for (int t = nterm(rng); t-- > 0;) {
      Monomial m(ring->slots(), 0);
      m[ring->todd_begin()] = static_cast<std::int16_t>(e1(rng));
      m[ring->todd_begin() + 1] = static_cast<std::int16_t>(e3(rng));
      s = s.add(Series::term(ring, m, rat(num(rng), den(rng))));
    }
    return s;
  };
  auto rnd_pdo = [&]() {
    Pdo p = pdo_zero(ring, var_T(0), -6);
    for (int t = 0; t < 2; ++t)
      p = pdo_add(p, pdo_monomial(rnd_series(), ord(rng), var_T(0), -6));
    return p;
  };
  for (int it = 0; it < 110; ++it) {
    Pdo a = rnd_pdo(), b = rnd_pdo(), c = rnd_pdo();
    Pdo lhs = pdo_mul(pdo_mul(a, b), c);
    Pdo rhs = pdo_mul(a, pdo_mul(b, c));
    // Dropped tails below the floor resurface at most `top order` symbols
    // higher, so the comparison stays at floor + 2 and above.
    CHECK(symbols_match(lhs, rhs, -4));
  }
}
