#include "hbgw/hodge.hpp"

#include <numeric>
#include <stdexcept>

namespace hbgw {

namespace {

long psum(const Partition& I) {
  return std::accumulate(I.begin(), I.end(), 0L);
}

std::vector<int> distinct_values(const Partition& I) {
  std::vector<int> v;
  for (int x : I)
    if (v.empty() || v.back() != x) v.push_back(x);
  return v;
}

}  // namespace

Rational fp_coefficient(int j) {
  if (j < 1) throw std::invalid_argument("fp_coefficient: j < 1");
  Rational p = 1;
  for (int i = 0; i < 2 * j; ++i) p /= 2;
  return (p - 1) * bernoulli(2 * j) / (Rational(j) * (2 * j - 1));
}

const Rational& HodgeEngine::zwk(int h, Partition I) {
  I = sorted_partition(std::move(I));
  auto key = std::make_pair(h, I);
  auto it = zwk_.find(key);
  if (it != zwk_.end()) return it->second;
  Rational val = compute_zwk(h, I);
  return zwk_.emplace(std::move(key), std::move(val)).first->second;
}

Rational HodgeEngine::compute_zwk(int h, const Partition& I) {
  if (I.empty()) return h == 0 ? 1 : 0;
  const int n = static_cast<int>(I.size());
  if (psum(I) != 3L * h + n) return 0;  // every exp-product sits on this shell
  const int v = I.back();
  const int mv = multiplicity(I, v);
  Partition rest = remove_one(I, v);
  Rational acc = 0;
  for (const auto& [J, w] : sub_multisets(rest)) {
    (void)w;  // coefficient algebra: each exponent split occurs once
    Partition Jv = insert_one(J, v);
    long excess = psum(Jv) - static_cast<long>(Jv.size());
    if (excess % 3 != 0) continue;
    int h1 = static_cast<int>(excess / 3);
    const Rational& c = wk_.correlator(h1 + 1, Jv);
    if (c == 0) continue;
    Rational f = c / aut_factor(Jv);
    acc += Rational(multiplicity(J, v) + 1) * f *
           zwk(h - h1, multiset_diff(rest, J));
  }
  return acc / mv;
}

Rational HodgeEngine::zflow(int m, int h, const Partition& I) {
  auto key = std::make_tuple(m, h, I);
  auto it = flow_.find(key);
  if (it != flow_.end()) return it->second;
  Rational val = compute_zflow(m, h, I);
  flow_.emplace(std::move(key), val);
  return val;
}

// One step of the exponential flow z_m = (1/m) G z_{m-1} evaluated per key.
// Each generator D_j read at target (h, I) pulls sources whose excess
// 3h + n - sum exceeds the target's by exactly 2j-1, which bounds both m
// and j by the target's excess.
Rational HodgeEngine::compute_zflow(int m, int h, const Partition& I) {
  const int n = static_cast<int>(I.size());
  const long excess = 3L * h + n - psum(I);
  if (m == 0) return excess == 0 ? zwk(h, I) : 0;
  if (excess < m || (excess - m) % 2 != 0) return 0;
  const long budget = excess - (m - 1);
  Rational acc = 0;
  for (int j = 1; 2 * j - 1 <= budget; ++j) {
    Rational g = fp_coefficient(j);
    // -t_i d_{i+2j-1}
    for (int i : distinct_values(I)) {
      Partition src = insert_one(remove_one(I, i), i + 2 * j - 1);
      acc -= g * Rational(multiplicity(I, i + 2 * j - 1) + 1) *
             zflow(m - 1, h, src);
    }
    // +d_{2j} from the shifted time t~_1
    acc += g * Rational(multiplicity(I, 2 * j) + 1) *
           zflow(m - 1, h, insert_one(I, 2 * j));
    // (eps^2/2) sum_a (-1)^a d_a d_{2j-2-a}
    for (int a = 0; a <= 2 * j - 2; ++a) {
      int b = 2 * j - 2 - a;
      Rational mu =
          a == b ? Rational(multiplicity(I, a) + 2) * (multiplicity(I, a) + 1)
                 : Rational(multiplicity(I, a) + 1) * (multiplicity(I, b) + 1);
      Rational sgn = a % 2 == 0 ? 1 : -1;
      acc += g * sgn * mu *
             zflow(m - 1, h - 1, insert_one(insert_one(I, a), b)) / 2;
    }
  }
  return acc / m;
}

const Rational& HodgeEngine::zh(int h, Partition I) {
  I = sorted_partition(std::move(I));
  auto key = std::make_pair(h, I);
  auto it = zh_.find(key);
  if (it != zh_.end()) return it->second;
  const int n = static_cast<int>(I.size());
  const long excess = 3L * h + n - psum(I);
  Rational val = 0;
  if (excess >= 0 && 3 * h >= -n) {
    for (int m = 0; m <= excess; ++m) val += zflow(m, h, I);
  }
  return zh_.emplace(std::move(key), std::move(val)).first->second;
}

const Rational& HodgeEngine::fh(int h, Partition I) {
  I = sorted_partition(std::move(I));
  auto key = std::make_pair(h, I);
  auto it = fh_.find(key);
  if (it != fh_.end()) return it->second;
  Rational val = compute_fh(h, I);
  return fh_.emplace(std::move(key), std::move(val)).first->second;
}

Rational HodgeEngine::compute_fh(int h, const Partition& I) {
  if (I.empty()) {
    // Vacuum: V = exp(sum_c phi_c eps^{2c}), triangular in c.
    if (h <= 0) return 0;
    Rational acc = Rational(h) * zh(h, {});
    for (int d = 1; d < h; ++d)
      acc -= Rational(d) * fh(d, {}) * zh(h - d, {});
    return acc / h;
  }
  const int n = static_cast<int>(I.size());
  if (3 * h < -n) return 0;
  const int v = I.back();
  const int mv = multiplicity(I, v);
  Partition rest = remove_one(I, v);

  Rational val = zh(h, I);
  for (int c = 1; 3 * (h - c) >= -n; ++c) val -= fh(h - c, I) * zh(c, {});
  Rational cross = 0;
  for (const auto& [J, w] : sub_multisets(rest)) {
    (void)w;
    if (J.size() == rest.size()) continue;  // proper sub-multisets only
    Partition Jv = insert_one(J, v);
    Partition K = multiset_diff(rest, J);
    const int nJv = static_cast<int>(Jv.size());
    const int nK = static_cast<int>(K.size());
    for (int h1 = -(nJv / 3) - 1; 3 * (h - h1) >= -nK; ++h1) {
      const Rational& f = fh(h1, Jv);
      if (f == 0) continue;
      const Rational& z = zh(h - h1, K);
      if (z == 0) continue;
      cross += Rational(multiplicity(J, v) + 1) * f * z;
    }
  }
  val -= cross / mv;
  return val;
}

Rational HodgeEngine::hodge_correlator(int g, Partition I) {
  I = sorted_partition(std::move(I));
  if (g < 0) return 0;
  Rational a = aut_factor(I);
  return a * fh(g - 1, I);
}

Rational composite_from_connected(
    int h, const Partition& I,
    const std::function<Rational(int, const Partition&)>& connected) {
  // Enumerate multisets of blocks (h_b, J_b) in strictly decreasing
  // canonical order with per-block repetition counts; the weight of a block
  // repeated m times is connected^m / m!.
  using Block = std::pair<int, Partition>;
  std::function<Rational(int, const Partition&, const Block*)> rec =
      [&](int h_rem, const Partition& I_rem, const Block* bound) -> Rational {
    if (I_rem.empty() && h_rem == 0) return 1;
    Rational total = 0;
    // Candidate blocks: sub-multisets of I_rem with genus parts from -1 up.
    for (const auto& [J, w] : sub_multisets(I_rem)) {
      (void)w;
      int hb_max = h_rem + static_cast<int>(I_rem.size());
      for (int hb = -1; hb <= hb_max; ++hb) {
        if (J.empty() && hb < 1) continue;  // vacuum blocks carry eps^2
        Block blk{hb, J};
        if (bound && !(blk < *bound)) continue;
        Rational f = connected(hb, J);
        if (f == 0) continue;
        Partition rem = multiset_diff(I_rem, J);
        Rational fpow = 1;
        Rational mfact = 1;
        for (int m = 1;; ++m) {
          fpow *= f;
          mfact *= m;
          int h_next = h_rem - m * hb;
          // All remaining blocks are strictly smaller than blk.
          Rational tail = rec(h_next, rem, &blk);
          total += fpow / mfact * tail;
          if (J.empty()) {
            if (hb <= 0 || h_next - hb < -(2 * static_cast<int>(I.size()) + 8))
              break;
            continue;
          }
          bool fits = true;
          try {
            rem = multiset_diff(rem, J);
          } catch (const std::invalid_argument&) {
            fits = false;
          }
          if (!fits) break;
        }
      }
    }
    return total;
  };
  return rec(h, sorted_partition(I), nullptr);
}

Series hodge_apply_D(int j, const Series& S) {
  const RingPtr& ring = S.ring();
  if (ring->tsmall_end() == ring->tsmall_begin() || ring->hbar_slot() < 0)
    throw std::invalid_argument("hodge_apply_D: ring needs t and hbar");
  if (j < 1) throw std::invalid_argument("hodge_apply_D: j < 1");
  const int idx_max = ring->tsmall_end() - ring->tsmall_begin() - 1;
  Series out = Series::zero(ring);
  for (int i = 0; i <= idx_max; ++i) {
    int p = i + 2 * j - 1;
    if (p > idx_max) continue;
    Series dS = S.derive(var_t(p));
    if (dS.is_zero()) continue;
    out = out.sub(dS.mul(Series::variable(ring, var_t(i))));
    if (i == 1) out = out.add(dS);
  }
  Monomial up(ring->slots(), 0);
  up[ring->hbar_slot()] = 1;
  for (int a = 0; a <= 2 * j - 2; ++a) {
    int b = 2 * j - 2 - a;
    if (a > idx_max || b > idx_max) continue;
    Rational c = Rational(a % 2 == 0 ? 1 : -1, 2);
    Series d2 = S.derive(var_t(a)).derive(var_t(b));
    if (d2.is_zero()) continue;
    out = out.add(d2.shift(up, c));
  }
  return out;
}

Series hodge_apply_exp_G(const Series& S) {
  const RingPtr& ring = S.ring();
  const int idx_max = ring->tsmall_end() - ring->tsmall_begin() - 1;
  const int j_max = idx_max + 1;
  auto apply_G = [&](const Series& f) {
    Series out = Series::zero(ring);
    for (int j = 1; j <= j_max; ++j) {
      Series d = hodge_apply_D(j, f);
      if (!d.is_zero()) out = out.add(d.scale(fp_coefficient(j)));
    }
    return out;
  };
  Series acc = S;
  Series cur = S;
  const int cap = 4 * ring->termination_cap() + 64;
  for (int m = 1;; ++m) {
    if (m > cap)
      throw std::domain_error("hodge_apply_exp_G: flow did not terminate");
    cur = apply_G(cur).scale(Rational(1, m));
    if (cur.is_zero()) break;
    acc = acc.add(cur);
  }
  return acc;
}

Series hodge_free_energy(const RingPtr& ring, HodgeEngine& engine) {
  if (ring->tsmall_end() == ring->tsmall_begin() || ring->hbar_slot() < 0)
    throw std::invalid_argument("hodge_free_energy: ring needs t and hbar");
  const int idx_max = ring->tsmall_end() - ring->tsmall_begin() - 1;
  const int count_max = ring->policy().t_count_max;
  Series F = Series::zero(ring);
  for (int g = 0; g - 1 <= ring->hbar_max(); ++g) {
    if (g - 1 < ring->hbar_min()) continue;
    for (int n = 0; n <= count_max; ++n) {
      if (2 * g - 2 + n <= 0) continue;
      // Degree window of the Hodge pairing: 0 <= 3g-3+n-sum <= 3g.
      for (int sum = std::max(0, n - 3); sum <= 3 * g - 3 + n; ++sum) {
        for (const auto& I : partitions_fixed(n, sum, idx_max)) {
          Rational c = engine.hodge_correlator(g, I);
          if (c == 0) continue;
          Monomial m(ring->slots(), 0);
          m[ring->hbar_slot()] = static_cast<std::int16_t>(g - 1);
          for (int v : I) ++m[ring->tsmall_begin() + v];
          if (ring->fit(m) != RingContext::Fit::kOk) continue;
          F = F.add(Series::term(ring, m, c / aut_factor(I)));
        }
      }
    }
  }
  return F;
}

Series hodge_v(const RingPtr& ring) {
  if (ring->tsmall_end() == ring->tsmall_begin())
    throw std::invalid_argument("hodge_v: ring needs t variables");
  const int idx_max = ring->tsmall_end() - ring->tsmall_begin() - 1;
  const int rounds = ring->policy().t_count_max + 2;
  Series v = Series::variable(ring, var_t(0));
  for (int r = 0; r < rounds; ++r) {
    Series next = Series::variable(ring, var_t(0));
    Series vpow = Series::one(ring);
    Rational fact = 1;
    for (int i = 1; i <= idx_max; ++i) {
      vpow = vpow.mul(v);
      fact *= i;
      next = next.add(
          vpow.mul(Series::variable(ring, var_t(i))).scale(1 / fact));
    }
    if (next == v) return v;
    v = next;
  }
  throw std::domain_error("hodge_v: fixed point did not stabilize");
}

Series hodge_genus0(const RingPtr& ring) {
  const int idx_max = ring->tsmall_end() - ring->tsmall_begin() - 1;
  if (idx_max < 1) throw std::invalid_argument("hodge_genus0: need t_1");
  Series v = hodge_v(ring);
  std::vector<Series> vp{Series::one(ring)};
  for (int k = 1; k <= 2 * idx_max + 1; ++k) vp.push_back(vp.back().mul(v));
  std::vector<Series> tt;
  for (int i = 0; i <= idx_max; ++i) {
    Series s = Series::variable(ring, var_t(i));
    if (i == 1) s = s.sub(Series::one(ring));
    tt.push_back(s);
  }
  Series H = Series::zero(ring);
  for (int i = 0; i <= idx_max; ++i) {
    for (int j = 0; j <= idx_max; ++j) {
      Series w = tt[i].mul(tt[j]).mul(vp[i + j + 1]);
      if (w.is_zero()) continue;
      Rational c = Rational(1, 2) / (factorial(i) * factorial(j) * (i + j + 1));
      H = H.add(w.scale(c));
    }
  }
  return H;
}

Series hodge_genus1(const RingPtr& ring) {
  // The t_0-derivative of v needs one extra unit of t-count headroom:
  // count-c coefficients of dv/dt_0 live in count-(c+1) terms of v.
  TruncationPolicy q = ring->policy();
  q.t_count_max += 1;
  auto big = ring_new(q, ring->active());
  Series v = hodge_v(big);
  Series v0 = v.derive(var_t(0));
  return v0.log_series()
      .scale(Rational(1, 24))
      .sub(v.scale(Rational(1, 16)))
      .restrict_to(ring);
}

std::vector<Rational> kappa_b_from_s(const std::vector<Rational>& s) {
  // exp(-sum s_d z^d) via n e_n = sum_k (-k s_k) e_{n-k}; b = 1 - e.
  const int dmax = static_cast<int>(s.size());
  std::vector<Rational> e(dmax + 1, 0);
  e[0] = 1;
  for (int n = 1; n <= dmax; ++n) {
    Rational acc = 0;
    for (int k = 1; k <= n; ++k) acc += Rational(-k) * s[k - 1] * e[n - k];
    e[n] = acc / n;
  }
  std::vector<Rational> b(dmax);
  for (int d = 1; d <= dmax; ++d) b[d - 1] = -e[d];
  return b;
}

namespace {

void kappa_points_rec(const std::vector<Rational>& weights, std::size_t p,
                      long budget, const Rational& acc, Partition& parts,
                      int g,
                      const std::function<Rational(int, const Partition&)>& corr,
                      Rational& total) {
  if (p == weights.size()) {
    Rational c = corr(g, parts);
    if (c != 0) total += acc * c;
    return;
  }
  if (weights[p] == 0) {
    parts.push_back(0);
    kappa_points_rec(weights, p + 1, budget, acc, parts, g, corr, total);
    parts.pop_back();
    return;
  }
  Rational wk = 1;
  for (long k = 0; k <= budget; ++k) {
    parts.push_back(static_cast<int>(k));
    kappa_points_rec(weights, p + 1, budget - k, acc * wk, parts, g, corr,
                     total);
    parts.pop_back();
    wk *= weights[p];
  }
}

void kappa_extra_rec(int g, const std::vector<Rational>& weights,
                     const std::vector<Rational>& b, int n_extra, int d_min,
                     long budget, const Rational& acc, Partition& parts,
                     const std::function<Rational(int, const Partition&)>& corr,
                     Rational& total) {
  if (n_extra == 0) {
    Partition base = parts;
    kappa_points_rec(weights, 0, budget, acc, base, g, corr, total);
    return;
  }
  // Non-decreasing d choices with the 1/aut factor folded in as runs.
  for (int d = d_min; d <= static_cast<int>(b.size()); ++d) {
    if (d + 1 > budget) break;
    if (b[d - 1] == 0) continue;
    int run = 1;
    for (std::size_t q = parts.size(); q-- > 0;) {
      if (parts[q] == d + 1)
        ++run;
      else
        break;
    }
    parts.push_back(d + 1);
    kappa_extra_rec(g, weights, b, n_extra - 1, d, budget - (d + 1),
                    acc * b[d - 1] / run, parts, corr, total);
    parts.pop_back();
  }
}

}  // namespace

Rational kappa_integral(
    int g, const std::vector<Rational>& weights, const std::vector<Rational>& b,
    const std::function<Rational(int, const Partition&)>& corr) {
  const int n = static_cast<int>(weights.size());
  const int n_extra_max = std::max(0, 3 * g - 3 + n);
  Rational total = 0;
  for (int n_extra = 0; n_extra <= n_extra_max; ++n_extra) {
    long budget = 3L * g - 3 + n + n_extra;
    if (budget < 0) continue;
    Partition parts;
    kappa_extra_rec(g, weights, b, n_extra, 1, budget, 1, parts, corr, total);
  }
  return total;
}

Series phi_ratio_residual(int order) {
  TruncationPolicy p;
  p.aux_order = order;
  p.genus_max = 0;
  p.hbar_min = 0;
  p.hbar_max = 0;
  VarSet vs;
  vs.zinv = true;
  auto ring = ring_new(p, vs);

  auto u_pow_coeff = [&](int e, const Rational& c) {
    Monomial m(ring->slots(), 0);
    m[0] = static_cast<std::int16_t>(e);
    return Series::term(ring, m, c);
  };

  Series res = Series::zero(ring);
  // -log(1 + u/2) + (1/2) log(1 + u)
  Rational half_pow = 1;
  for (int mdeg = 1; mdeg <= order; ++mdeg) {
    half_pow /= 2;
    Rational sgn = mdeg % 2 == 1 ? 1 : -1;
    res = res.add(u_pow_coeff(mdeg, -sgn * half_pow / mdeg));
    res = res.add(u_pow_coeff(mdeg, sgn / (2 * Rational(mdeg))));
  }
  // sum_k gamma_k [ (z+1)^{1-2k} - z^{1-2k} ]
  for (int k = 1; 2 * k - 1 <= order; ++k) {
    Rational gk = fp_coefficient(k);
    for (int i = 1; 2 * k - 1 + i <= order; ++i) {
      Rational c = binomial(static_cast<long>(1 - 2 * k), static_cast<long>(i));
      res = res.add(u_pow_coeff(2 * k - 1 + i, gk * c));
    }
  }
  return res;
}

}  // namespace hbgw
