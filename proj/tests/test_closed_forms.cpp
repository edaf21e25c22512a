#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hbgw/closed_forms.hpp"

using namespace hbgw;

namespace {

TruncationPolicy box(int count, int idx, int xdeg) {
  TruncationPolicy p;
  p.genus_max = 2;
  p.t_count_max = count;
  p.t_index_max = idx;
  p.x_degree_max = xdeg;
  p.hbar_min = -1;
  p.todd_weight_max = count * (2 * idx + 1);
  p.tsmall_index_max = 0;
  p.tsmall_sum_max = 0;
  p.nu_max = 0;
  p.aux_order = 0;
  return p;
}

RingPtr xt(const TruncationPolicy& p) {
  VarSet v;
  v.x = v.todd = true;
  return ring_new(p, v);
}

}  // namespace

TEST_CASE("Q solve and its defining equation") {
  auto ring = xt(box(3, 2, 6));
  QData qd = solve_q(ring);
  CHECK(qd.q.constant_term() == 1);
  CHECK(q_equation_residual(qd).is_zero());
  CHECK(qd.u.scale(rat(-1, 2)).exp_series() == qd.q);
  CHECK(qd.y == qd.q.mul(qd.q));
}

TEST_CASE("first-time sector is a geometric series") {
  auto ring = xt(box(5, 0, 4));
  QData qd = solve_q(ring);
  Series expected = x_series(ring).scale(rat(-1, 2)).mul(
      Series::one(ring).sub(Series::variable(ring, var_T(0))).inverse());
  CHECK(qd.q == expected);
}

TEST_CASE("flow equations for Q and y") {
  TruncationPolicy inner = box(2, 2, 4);
  TruncationPolicy wide = box(3, 2, 5);
  auto rt = xt(inner);
  QData qd = solve_q(xt(wide));
  for (int a = 0; a <= 2; ++a) {
    CHECK(q_flow_residual(qd, a).restrict_to(rt).is_zero());
    CHECK(y_flow_residual(qd, a).restrict_to(rt).is_zero());
  }
  Series prod = Series::one(qd.q.ring())
                    .sub(iz_variable(qd, 1))
                    .mul(qd.y.derive(var_T(0)));
  CHECK(prod.restrict_to(rt) == Series::one(rt));
}

TEST_CASE("two closed genus-zero forms agree") {
  auto ring = xt(box(3, 2, 6));
  QData qd = solve_q(ring);
  CHECK(f0_closed(qd) == f0_alexandrov(ring));
}

TEST_CASE("alexandrov form, T1-only degeneration") {
  auto ring = xt(box(6, 0, 4));
  Series x2 = x_series(ring).mul(x_series(ring));
  Series lg = Series::one(ring)
                  .sub(Series::variable(ring, var_T(0)))
                  .log_series();
  Series expected = x2.mul(log_neg_half_x(ring)).scale(rat(1, 4));
  expected = expected.sub(x2.scale(rat(3, 8)));
  expected = expected.sub(x2.mul(lg).scale(rat(1, 4)));
  CHECK(f0_alexandrov(ring) == expected);
}

TEST_CASE("genus zero against the cut-and-join slice") {
  GbgwEngine eng(6);
  auto rep = verify_f0(box(2, 1, 5), eng);
  CHECK(rep.pass());
  CHECK(rep.checked > 50);
}

TEST_CASE("genus one jet forms against the cut-and-join slice") {
  GbgwEngine eng(6);
  auto rep = verify_f1(box(2, 1, 5), eng);
  CHECK(rep.pass());
}

TEST_CASE("Itzykson-Zuber change of variables") {
  GbgwEngine eng(6);
  WkTable wk;
  auto rep = verify_iz(box(2, 1, 5), eng, wk);
  CHECK(rep.pass());
}

TEST_CASE("kappa Bernoulli vacuum values") {
  WkTable wk;
  CHECK(kw_bernoulli_check(2, wk).pass());
  CHECK(kw_bernoulli_check(3, wk).pass());
  CHECK_THROWS_AS(kw_bernoulli_check(1, wk), std::invalid_argument);
}
