#include "hbgw/pdo.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace hbgw {

namespace {

void check_compatible(const Pdo& a, const Pdo& b) {
  if (a.ring != b.ring || !(a.spatial == b.spatial) || a.floor != b.floor)
    throw std::invalid_argument("Pdo: ring/spatial/floor mismatch");
}

void insert_symbol(Pdo& p, int order, const Series& s) {
  if (s.is_zero()) return;
  auto [it, fresh] = p.sym.emplace(order, s);
  if (!fresh) {
    it->second = it->second.add(s);
    if (it->second.is_zero()) p.sym.erase(it);
  }
}

}  // namespace

Pdo pdo_zero(RingPtr ring, VarId spatial, int floor) {
  return Pdo{std::move(ring), spatial, floor, {}};
}

Pdo pdo_monomial(const Series& coeff, int order, VarId spatial, int floor) {
  Pdo p{coeff.ring(), spatial, floor, {}};
  if (order >= floor) insert_symbol(p, order, coeff);
  return p;
}

Pdo pdo_add(const Pdo& a, const Pdo& b) {
  check_compatible(a, b);
  Pdo r = a;
  for (const auto& [k, s] : b.sym) insert_symbol(r, k, s);
  return r;
}

Pdo pdo_sub(const Pdo& a, const Pdo& b) {
  return pdo_add(a, pdo_scale(b, -1));
}

Pdo pdo_scale(const Pdo& a, const Rational& c) {
  Pdo r{a.ring, a.spatial, a.floor, {}};
  if (c == 0) return r;
  for (const auto& [k, s] : a.sym) r.sym.emplace(k, s.scale(c));
  return r;
}

Pdo pdo_mul(const Pdo& a, const Pdo& b) {
  check_compatible(a, b);
  Pdo r{a.ring, a.spatial, a.floor, {}};
  if (a.sym.empty() || b.sym.empty()) return r;
  int amax = a.sym.rbegin()->first;
  for (const auto& [l, bl] : b.sym) {
    int jmax = amax + l - a.floor;
    if (jmax < 0) continue;
    std::vector<Series> db{bl};
    for (int j = 1; j <= jmax; ++j) db.push_back(db.back().derive(a.spatial));
    for (const auto& [k, ak] : a.sym) {
      for (int j = 0; k + l - j >= a.floor; ++j) {
        if (db[j].is_zero()) break;
        Rational c = binomial(static_cast<long>(k), static_cast<long>(j));
        if (c == 0) break;
        insert_symbol(r, k + l - j, ak.mul(db[j]).scale(c));
      }
    }
  }
  return r;
}

Pdo pdo_plus_part(const Pdo& a) {
  Pdo r{a.ring, a.spatial, a.floor, {}};
  for (const auto& [k, s] : a.sym)
    if (k >= 0) r.sym.emplace(k, s);
  return r;
}

Pdo pdo_commutator(const Pdo& a, const Pdo& b) {
  return pdo_sub(pdo_mul(a, b), pdo_mul(b, a));
}

Pdo pdo_lax(const Series& u, VarId spatial, int floor) {
  Pdo p = pdo_monomial(Series::one(u.ring()), 2, spatial, floor);
  insert_symbol(p, 0, u.scale(2));
  return p;
}

Pdo pdo_sqrt_lax(const Series& u, VarId spatial, int floor) {
  Pdo lax = pdo_lax(u, spatial, floor);
  Pdo root = pdo_monomial(Series::one(u.ring()), 1, spatial, floor);
  // Symbol 1-m of root*root is 2 r_m plus terms in the r_j already fixed,
  // so one ascending sweep pins each correction r_m at order -m.
  for (int m = 0; -m >= floor; ++m) {
    Pdo err = pdo_sub(lax, pdo_mul(root, root));
    auto it = err.sym.find(1 - m);
    if (it == err.sym.end()) continue;
    insert_symbol(root, -m, it->second.scale(rat(1, 2)));
  }
  return root;
}

Series kdv_flow_rhs(const Series& u, VarId spatial, int a) {
  if (a < 0) throw std::invalid_argument("kdv_flow_rhs: negative flow index");
  const RingPtr& ring = u.ring();
  int floor = -(2 * a + 4);
  Pdo lax = pdo_lax(u, spatial, floor);
  Pdo p = pdo_sqrt_lax(u, spatial, floor);
  for (int j = 0; j < a; ++j) p = pdo_mul(lax, p);
  p = pdo_plus_part(p);
  Pdo c = pdo_commutator(p, lax);
  for (const auto& [k, s] : c.sym)
    if (k >= 1 && !s.is_zero())
      throw std::logic_error("kdv_flow_rhs: commutator keeps a derivation part");
  Series c0 = Series::zero(ring);
  if (auto it = c.sym.find(0); it != c.sym.end()) c0 = it->second;
  Rational norm = rat(1, 2) / double_factorial(2 * a + 1);
  if (a == 0) return c0.scale(norm);
  if (ring->hbar_slot() < 0)
    throw std::invalid_argument("kdv_flow_rhs: flow needs the hbar^2 variable");
  Monomial sh(ring->slots(), 0);
  sh[ring->hbar_slot()] = static_cast<std::int16_t>(a);
  return c0.shift(sh, norm);
}

VerificationReport verify_kdv_flow_wk(int i, int genus_max, int count,
                                      int sum_max, WkTable& wk) {
  TruncationPolicy pt;
  pt.genus_max = genus_max;
  pt.t_count_max = count;
  pt.t_index_max = sum_max;
  pt.x_degree_max = 0;
  pt.aux_order = 0;
  pt.hbar_min = -1;
  pt.hbar_max = genus_max - 1;
  pt.tsmall_sum_max = sum_max;
  pt.tsmall_index_max = sum_max;
  pt.todd_weight_max = 0;
  pt.nu_max = 0;
  VarSet vars{.hbar2 = true, .tsmall = true};
  RingPtr rt = ring_new(pt, vars);
  // Margins: two t_0 derivatives plus up to 2i+1 spatial ones and one t_i
  // derivative on the comparison box; quadratic symbol terms reach two
  // hbar slots below the floor of u and one genus above its top.
  TruncationPolicy pe = pt;
  pe.t_count_max = count + 2 * i + 4;
  pe.tsmall_sum_max = sum_max + i;
  pe.tsmall_index_max = sum_max + i;
  pe.hbar_min = -(2 * i + 6);
  pe.hbar_max = genus_max + 1;
  RingPtr re = ring_new(pe, vars);
  Series f = wk_free_energy(re, wk);
  Series u = f.derive(var_t(0)).derive(var_t(0));
  Series lhs = u.derive(var_t(i)).restrict_to(rt);
  Series rhs = kdv_flow_rhs(u, var_t(0), i).restrict_to(rt);
  return compare_series("kdv-flow-wk-" + std::to_string(i), lhs, rhs);
}

VerificationReport verify_kdv_flow_gbgw(int a, const GbgwEngine& engine) {
  int cap = engine.weight_cap();
  if (cap - (2 * a + 3) < 1)
    throw std::invalid_argument("verify_kdv_flow_gbgw: weight cap too small");
  TruncationPolicy pt = engine.ring()->policy();
  pt.todd_weight_max = cap - (2 * a + 3);
  RingPtr rt = ring_new(pt, engine.ring()->active());
  Series u = engine.free_energy().derive(var_T(0)).derive(var_T(0));
  Series lhs = u.derive(var_T(a)).restrict_to(rt);
  Series rhs = kdv_flow_rhs(u, var_T(0), a).restrict_to(rt);
  return compare_series("kdv-flow-gbgw-" + std::to_string(a), lhs, rhs);
}

VerificationReport verify_tau_initial(const GbgwEngine& engine) {
  int cap = engine.weight_cap();
  TruncationPolicy pt = engine.ring()->policy();
  pt.t_index_max = 0;
  pt.t_count_max = cap - 2;
  pt.todd_weight_max = cap - 2;
  RingPtr rt = ring_new(pt, engine.ring()->active());
  Series u = engine.free_energy().derive(var_T(0)).derive(var_T(0));
  Series lhs = u.restrict_to(rt);
  Series coeff = Series::constant(rt, rat(1, 8))
                     .sub(Series::variable(rt, var_nu()).scale(rat(1, 2)));
  Series geom = Series::zero(rt);
  int t1 = rt->slot_of(var_T(0));
  for (int k = 0; k <= cap - 2; ++k) {
    Monomial m(rt->slots(), 0);
    m[t1] = static_cast<std::int16_t>(k);
    geom = geom.add(Series::term(rt, m, k + 1));
  }
  return compare_series("tau-initial", lhs, coeff.mul(geom));
}

}  // namespace hbgw
