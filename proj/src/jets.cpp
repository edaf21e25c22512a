#include "hbgw/jets.hpp"

#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "hbgw/closed_forms.hpp"
#include "hbgw/partitions.hpp"

namespace hbgw {

void JetPoly::insert(std::vector<int> exps, const Rational& c) {
  if (c == 0) return;
  while (!exps.empty() && exps.back() == 0) exps.pop_back();
  for (std::size_t s = 0; s < exps.size(); ++s)
    if (exps[s] < 0 && s != 1)
      throw std::invalid_argument("JetPoly: negative exponent outside slot 1");
  auto [it, fresh] = terms_.emplace(std::move(exps), c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

JetPoly JetPoly::constant(const Rational& c) {
  JetPoly p;
  p.insert({}, c);
  return p;
}

JetPoly JetPoly::monomial(std::vector<int> exps, const Rational& c) {
  JetPoly p;
  p.insert(std::move(exps), c);
  return p;
}

JetPoly JetPoly::add(const JetPoly& o) const {
  JetPoly out = *this;
  for (const auto& [e, c] : o.terms_) out.insert(e, c);
  return out;
}

JetPoly JetPoly::sub(const JetPoly& o) const {
  JetPoly out = *this;
  for (const auto& [e, c] : o.terms_) out.insert(e, -c);
  return out;
}

JetPoly JetPoly::scale(const Rational& c) const {
  JetPoly out;
  if (c == 0) return out;
  for (const auto& [e, v] : terms_) out.terms_.emplace(e, v * c);
  return out;
}

JetPoly JetPoly::mul(const JetPoly& o) const {
  JetPoly out;
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : o.terms_) {
      std::vector<int> e(std::max(ea.size(), eb.size()), 0);
      for (std::size_t s = 0; s < ea.size(); ++s) e[s] += ea[s];
      for (std::size_t s = 0; s < eb.size(); ++s) e[s] += eb[s];
      out.insert(std::move(e), ca * cb);
    }
  return out;
}

JetPoly JetPoly::derive(int slot) const {
  JetPoly out;
  for (const auto& [e, c] : terms_) {
    if (static_cast<std::size_t>(slot) >= e.size() || e[slot] == 0) continue;
    std::vector<int> d = e;
    d[slot] -= 1;
    out.insert(std::move(d), c * e[slot]);
  }
  return out;
}

std::string JetPoly::to_text() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << to_string(c);
    for (std::size_t s = 0; s < e.size(); ++s) {
      if (e[s] == 0) continue;
      os << "*z" << s;
      if (e[s] != 1) os << "^" << e[s];
    }
  }
  return os.str();
}

JetPoly jet_d1(const JetPoly& p, bool exponential_value) {
  JetPoly out;
  for (const auto& [e, c] : p.terms()) {
    for (std::size_t s = 0; s < e.size(); ++s) {
      if (e[s] == 0) continue;
      std::vector<int> d = e;
      if (d.size() < s + 2) d.resize(s + 2, 0);
      if (s == 0 && exponential_value) {
        d[1] += 1;
      } else {
        d[s] -= 1;
        d[s + 1] += 1;
      }
      JetPoly term = JetPoly::monomial(std::move(d), c * e[s]);
      out = out.add(term);
    }
  }
  return out;
}

LoopExpansion LoopExpansion::add(const LoopExpansion& o) const {
  if (orders() != o.orders())
    throw std::invalid_argument("LoopExpansion: order mismatch");
  LoopExpansion out(orders());
  for (int p = 0; p < orders(); ++p) out.ord_[p] = ord_[p].add(o.ord_[p]);
  return out;
}

LoopExpansion LoopExpansion::mul(const LoopExpansion& o) const {
  if (orders() != o.orders())
    throw std::invalid_argument("LoopExpansion: order mismatch");
  LoopExpansion out(orders());
  for (int a = 0; a < orders(); ++a) {
    if (ord_[a].is_zero()) continue;
    for (int b = 0; a + b < orders(); ++b)
      out.ord_[a + b] = out.ord_[a + b].add(ord_[a].mul(o.ord_[b]));
  }
  return out;
}

LoopExpansion LoopExpansion::scale(const Rational& c) const {
  LoopExpansion out(orders());
  for (int p = 0; p < orders(); ++p) out.ord_[p] = ord_[p].scale(c);
  return out;
}

LoopExpansion LoopExpansion::scale_jet(const JetPoly& p) const {
  LoopExpansion out(orders());
  for (int q = 0; q < orders(); ++q) out.ord_[q] = ord_[q].mul(p);
  return out;
}

LoopExpansion LoopExpansion::d1(bool exponential_value) const {
  LoopExpansion out(orders());
  for (int p = 0; p < orders(); ++p)
    out.ord_[p] = jet_d1(ord_[p], exponential_value);
  return out;
}

LoopExpansion LoopExpansion::shifted(int s) const {
  LoopExpansion out(orders());
  for (int p = 0; p + s < orders(); ++p) out.ord_[p + s] = ord_[p];
  return out;
}

namespace {

JetPoly value_power(int j, const Rational& c) {
  return JetPoly::monomial(std::vector<int>{j}, c);
}

LoopExpansion d1n(LoopExpansion e, int n, bool exponential) {
  for (int i = 0; i < n; ++i) e = e.d1(exponential);
  return e;
}

// Kernel data of one side of the loop equation, expanded to a common
// number of spectral orders. kmain[k] multiplies dF/d(jet k); mpair[k][l]
// multiplies the quadratic one-loop block with weight pair_weight; ntail[k]
// multiplies dF_1/d(jet k) with weight tail_weight; vacuum is the
// inhomogeneous genus-one part. sign is the sign carried by the kmain sum.
struct Kernels {
  std::vector<LoopExpansion> kmain;
  std::vector<std::vector<LoopExpansion>> mpair;
  std::vector<LoopExpansion> ntail;
  LoopExpansion vacuum;
  Rational pair_weight;
  Rational tail_weight;
  int sign = 1;
  bool exponential = false;
};

// Square-root density: 1/P = lambda^{-1/2} H0 with
// H0 = sum_j C(2j,j) 4^{-j} z0^j lambda^{-j}. Half-integer powers always
// pair up, so every stored object carries integer orders; the lambda^{-1}
// from H*H pairs is restored with shifted(1).
Kernels wk_kernels(int kmax, int orders) {
  LoopExpansion h0(orders), p2(orders), p4(orders);
  for (int j = 0; j < orders; ++j)
    h0.at(j) = value_power(j, binomial(2L * j, j) / rational_pow(Rational(4), j));
  for (int j = 0; j + 1 < orders; ++j) p2.at(j + 1) = value_power(j, 1);
  for (int j = 0; j + 2 < orders; ++j) p4.at(j + 2) = value_power(j, j + 1);

  std::vector<LoopExpansion> h;
  for (int m = 0; m <= std::max(kmax, 2); ++m) h.push_back(d1n(h0, m, false));

  Kernels ker{{}, {}, {}, p4.scale(rat(1, 16)), rat(1, 2), rat(1, 16), -1,
              false};
  for (int k = 0; k <= kmax; ++k) {
    LoopExpansion acc = d1n(p2, k, false);
    for (int j = 1; j <= k; ++j)
      acc = acc.add(
          h[j - 1].mul(h[k + 1 - j]).shifted(1).scale(binomial(k, j)));
    ker.kmain.push_back(acc);
  }
  for (int k = 0; k <= 1; ++k) {
    ker.mpair.emplace_back();
    for (int l = 0; l <= 1; ++l)
      ker.mpair.back().push_back(h[k + 1].mul(h[l + 1]).shifted(1));
    ker.ntail.push_back(d1n(p4, k + 2, false));
  }
  return ker;
}

// Exponential density: 1/B = sum_j C(2j,j) e^{j u_0} lambda^{-j} already
// carries integer orders, so no pairing shift is needed anywhere.
Kernels gbgw_kernels(int kmax, int orders) {
  LoopExpansion binv(orders), b2(orders), b4(orders), s(orders);
  for (int j = 0; j < orders; ++j) {
    Rational p4j = rational_pow(Rational(4), j);
    binv.at(j) = value_power(j, binomial(2L * j, j));
    b2.at(j) = value_power(j, p4j);
    b4.at(j) = value_power(j, p4j * (j + 1));
    // 1/(8 B^4) - 1/(4 B^2)
    s.at(j) = value_power(j, p4j * rat(j - 1, 8));
  }

  std::vector<LoopExpansion> h;
  for (int m = 0; m <= std::max(kmax, 2); ++m) h.push_back(d1n(binv, m, true));

  Kernels ker{{}, {}, {}, b2.scale(rat(1, 8)).add(b4.scale(rat(-1, 16))),
              2,  2,  1,  true};
  for (int k = 0; k <= kmax; ++k) {
    LoopExpansion acc = d1n(b2, k, true);
    for (int j = 1; j <= k; ++j)
      acc = acc.add(h[j - 1].mul(h[k + 1 - j]).scale(binomial(k, j)));
    ker.kmain.push_back(acc);
  }
  for (int k = 0; k <= 1; ++k) {
    ker.mpair.emplace_back();
    for (int l = 0; l <= 1; ++l)
      ker.mpair.back().push_back(h[k + 1].mul(h[l + 1]));
    ker.ntail.push_back(d1n(s, k + 2, true));
  }
  return ker;
}

// Unique solution of the stacked order-by-order system
// sum_i x_i cols[i] + cst = 0; throws when rank-deficient or inconsistent.
std::vector<Rational> solve_loop_system(const std::vector<LoopExpansion>& cols,
                                        const LoopExpansion& cst) {
  const int n = static_cast<int>(cols.size());
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  for (int p = 0; p < cst.orders(); ++p) {
    std::set<std::vector<int>> keys;
    for (const auto& [e, c] : cst.at(p).terms()) keys.insert(e);
    for (const auto& col : cols)
      for (const auto& [e, c] : col.at(p).terms()) keys.insert(e);
    for (const auto& key : keys) {
      std::vector<Rational> row(n, Rational(0));
      for (int i = 0; i < n; ++i) {
        auto it = cols[i].at(p).terms().find(key);
        if (it != cols[i].at(p).terms().end()) row[i] = it->second;
      }
      Rational rhs = 0;
      auto it = cst.at(p).terms().find(key);
      if (it != cst.at(p).terms().end()) rhs = -it->second;
      a.push_back(std::move(row));
      b.push_back(rhs);
    }
  }

  const int m = static_cast<int>(a.size());
  std::vector<int> pivot(n, -1);
  int r = 0;
  for (int c = 0; c < n && r < m; ++c) {
    int p = -1;
    for (int i = r; i < m; ++i)
      if (a[i][c] != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(a[p], a[r]);
    std::swap(b[p], b[r]);
    Rational inv = Rational(1) / a[r][c];
    for (int j = c; j < n; ++j) a[r][j] *= inv;
    b[r] *= inv;
    for (int i = 0; i < m; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rational f = a[i][c];
      for (int j = c; j < n; ++j) a[i][j] -= f * a[r][j];
      b[i] -= f * b[r];
    }
    pivot[c] = r;
    ++r;
  }
  for (int c = 0; c < n; ++c)
    if (pivot[c] < 0) throw std::runtime_error("loop system underdetermined");
  for (int i = r; i < m; ++i)
    if (b[i] != 0) throw std::runtime_error("loop system inconsistent");
  std::vector<Rational> x;
  for (int c = 0; c < n; ++c) x.push_back(b[pivot[c]]);
  return x;
}

// Genus-two basis: jet monomials prod_{k>=2} z_k^{m_k} z_1^e with weight
// sum k m_k + e = 2 and degree sum (k-1) m_k <= 3. There are seven.
std::vector<std::vector<int>> genus2_basis() {
  std::vector<std::vector<int>> basis;
  for (int m2 = 0; m2 <= 3; ++m2)
    for (int m3 = 0; 2 * m3 <= 3 - m2; ++m3)
      for (int m4 = 0; 3 * m4 <= 3 - m2 - 2 * m3; ++m4) {
        int e = 2 - (2 * m2 + 3 * m3 + 4 * m4);
        basis.push_back({0, e, m2, m3, m4});
      }
  return basis;
}

LoopSolution loop_solve(bool exponential, int genus) {
  if (genus != 1 && genus != 2)
    throw std::invalid_argument("loop_solve: genus must be 1 or 2");
  const int orders = 3 * genus + 3;
  const int kmax = 3 * genus - 2;
  Kernels ker = exponential ? gbgw_kernels(kmax, orders)
                            : wk_kernels(kmax, orders);
  const JetPoly one = JetPoly::constant(1);
  const JetPoly z1inv = JetPoly::monomial({0, -1}, 1);
  const Rational sgn(ker.sign);

  if (genus == 1) {
    std::vector<LoopExpansion> cols = {
        ker.kmain[0].scale(sgn),
        ker.kmain[1].scale_jet(z1inv).scale(sgn)};
    std::vector<Rational> x = solve_loop_system(cols, ker.vacuum);
    return LoopSolution{1, x[0], x[1], {}};
  }

  LoopSolution g1 = loop_solve(exponential, 1);
  // One-loop derivative data entering the quadratic block.
  std::vector<JetPoly> d = {JetPoly::constant(g1.value_slope),
                            z1inv.scale(g1.log_coeff)};
  std::vector<std::vector<JetPoly>> dd(2, std::vector<JetPoly>(2));
  dd[1][1] = JetPoly::monomial({0, -2}, -g1.log_coeff);

  LoopExpansion cst(orders);
  for (int k = 0; k <= 1; ++k)
    for (int l = 0; l <= 1; ++l)
      cst = cst.add(ker.mpair[k][l]
                        .scale_jet(dd[k][l].add(d[k].mul(d[l])))
                        .scale(ker.pair_weight));
  for (int k = 0; k <= 1; ++k)
    cst = cst.add(ker.ntail[k].scale_jet(d[k]).scale(ker.tail_weight));

  std::vector<std::vector<int>> basis = genus2_basis();
  std::vector<LoopExpansion> cols;
  for (const auto& exps : basis) {
    JetPoly mon = JetPoly::monomial(exps, 1);
    LoopExpansion col(orders);
    for (int k = 1; k <= kmax; ++k) {
      JetPoly dk = mon.derive(k);
      if (dk.is_zero()) continue;
      col = col.add(ker.kmain[k].scale_jet(dk));
    }
    cols.push_back(col.scale(sgn));
  }

  std::vector<Rational> x = solve_loop_system(cols, cst);
  LoopSolution sol{2, g1.value_slope, g1.log_coeff, {}};
  for (std::size_t i = 0; i < basis.size(); ++i)
    sol.f2 = sol.f2.add(JetPoly::monomial(basis[i], x[i]));
  return sol;
}

}  // namespace

LoopSolution loop_solve_wk(int genus) { return loop_solve(false, genus); }

LoopSolution loop_solve_gbgw(int genus) { return loop_solve(true, genus); }

Series jet_eval(const JetPoly& p, const RingPtr& ring,
                const std::vector<Series>& jets) {
  Series acc = Series::zero(ring);
  Series inv1 = Series::zero(ring);
  bool have_inv = false;
  for (const auto& [exps, c] : p.terms()) {
    Series term = Series::constant(ring, c);
    for (std::size_t s = 0; s < exps.size(); ++s) {
      if (exps[s] == 0) continue;
      if (s >= jets.size())
        throw std::invalid_argument("jet_eval: missing jet value");
      if (exps[s] > 0) {
        term = term.mul(jets[s].pow(exps[s]));
      } else {
        if (!have_inv) {
          inv1 = jets[1].inverse();
          have_inv = true;
        }
        term = term.mul(inv1.pow(-exps[s]));
      }
    }
    acc = acc.add(term);
  }
  return acc;
}

VerificationReport verify_loop_wk(int sum_max, WkTable& wk) {
  if (sum_max < 3) throw std::invalid_argument("verify_loop_wk: sum_max < 3");
  const int count = sum_max - 3;

  TruncationPolicy pt;
  pt.genus_max = 2;
  pt.t_count_max = count;
  pt.t_index_max = 0;
  pt.x_degree_max = 0;
  pt.tsmall_sum_max = sum_max;
  pt.tsmall_index_max = sum_max;
  pt.todd_weight_max = 0;
  pt.nu_max = 0;
  RingPtr rt = ring_new(pt, VarSet{.tsmall = true});

  // Six spare t_0 slots: the highest jet is d^6 F_0 / dt_0^6.
  TruncationPolicy pe = pt;
  pe.t_count_max = count + 6;
  RingPtr re = ring_new(pe, VarSet{.tsmall = true});
  TruncationPolicy ph = pe;
  ph.hbar_min = -1;
  ph.hbar_max = 0;
  RingPtr rh = ring_new(ph, VarSet{.hbar2 = true, .tsmall = true});

  Series f0 = wk_free_energy(rh, wk).hbar_slice(-1, re);
  std::vector<Series> jets;
  Series cur = f0.derive(var_t(0)).derive(var_t(0));
  jets.push_back(cur);
  for (int k = 1; k <= 4; ++k) {
    cur = cur.derive(var_t(0));
    jets.push_back(cur);
  }

  LoopSolution sol = loop_solve_wk(2);
  Series lhs = jet_eval(sol.f2, re, jets).restrict_to(rt);

  Series rhs = Series::zero(rt);
  for (int n = 1; n <= count; ++n)
    for (const Partition& I : partitions_fixed(n, n + 3, sum_max)) {
      const Rational& c = wk.correlator(2, I);
      if (c == 0) continue;
      Monomial m(rt->slots(), 0);
      for (int v : I) m[rt->tsmall_begin() + v] += 1;
      rhs = rhs.add(Series::term(rt, m, c / aut_factor(I)));
    }
  return compare_series("loop-wk", lhs, rhs);
}

VerificationReport verify_loop_gbgw(const TruncationPolicy& policy,
                                    const GbgwEngine& engine) {
  TruncationPolicy pt = policy;
  pt.tsmall_sum_max = 0;
  pt.tsmall_index_max = 0;
  pt.nu_max = 0;
  pt.todd_weight_max = pt.t_count_max * (2 * pt.t_index_max + 1);
  VarSet xt{.x = true, .todd = true};
  RingPtr rt = ring_new(pt, xt);

  // Four spare x powers: the highest jet is d^4 u / dx^4.
  TruncationPolicy pw = pt;
  pw.x_degree_max += 4;
  RingPtr rw = ring_new(pw, xt);

  QData qd = solve_q(rw);
  std::vector<Series> jets;
  jets.push_back(qd.y.inverse());  // e^{u_0} = Q^{-2}
  Series cur = qd.u;
  for (int k = 1; k <= 4; ++k) {
    cur = cur.derive(var_x());
    jets.push_back(cur);
  }

  LoopSolution sol = loop_solve_gbgw(2);
  Series lhs = jet_eval(sol.f2, rw, jets).restrict_to(rt);

  TruncationPolicy ph = pt;
  ph.hbar_min = -1;
  ph.hbar_max = 1;
  RingPtr rh = ring_new(ph, VarSet{.x = true, .hbar2 = true, .todd = true});
  Series rhs = gbgw_free_energy_x(rh, engine).hbar_slice(1, rt);
  return compare_series("loop-gbgw", lhs, rhs);
}

}  // namespace hbgw
