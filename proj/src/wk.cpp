#include "hbgw/wk.hpp"

#include <numeric>
#include <stdexcept>

namespace hbgw {

namespace {

Rational pow2(int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= 2;
  for (int i = 0; i > e; --i) r /= 2;
  return r;
}

}  // namespace

const Rational& WkTable::correlator(int g, Partition I) {
  I = sorted_partition(std::move(I));
  auto key = std::make_pair(g, I);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  Rational val = compute(g, I);
  return memo_.emplace(std::move(key), std::move(val)).first->second;
}

void WkTable::poison(int g, Partition I, const Rational& value) {
  memo_[std::make_pair(g, sorted_partition(std::move(I)))] = value;
}

Rational WkTable::compute(int g, const Partition& I) {
  if (g < 0) return 0;
  for (int v : I)
    if (v < 0) return 0;
  const int n = static_cast<int>(I.size());
  if (2 * g - 2 + n <= 0) return 0;  // unstable
  long sum = std::accumulate(I.begin(), I.end(), 0L);
  if (sum != 3L * g - 3 + n) return 0;

  if (!I.empty() && I.front() == 0) {
    // String: remove a tau_0 and lower each remaining insertion.
    Partition rest = remove_one(I, 0);
    Rational val = 0;
    int prev = -1;
    for (int v : rest) {
      if (v == prev || v == 0) {
        prev = v;
        continue;
      }
      prev = v;
      int m = multiplicity(rest, v);
      val += Rational(m) * correlator(g, insert_one(remove_one(rest, v), v - 1));
    }
    if (g == 0 && rest == Partition{0, 0}) val += 1;
    return val;
  }
  if (!I.empty() && I.front() == 1) {
    // Dilaton.
    Partition rest = remove_one(I, 1);
    Rational val = Rational(2 * g - 2 + static_cast<int>(rest.size())) *
                   correlator(g, rest);
    if (g == 1 && rest.empty()) val += Rational(1, 24);
    return val;
  }
  return dvv(g, I);
}

// Lower the largest insertion tau_{k+1} (k >= 1) through the quadratic
// recursion:
// (2k+3)!! <tau_{k+1} tau_I> =
//   sum_l ((2 i_l + 2k+1)!! / (2 i_l - 1)!!) <tau_{i_l + k} tau_{I\l}>_g
//   + (1/2) sum_{i+j=k-1} (2i+1)!!(2j+1)!! [ <tau_i tau_j tau_I>_{g-1}
//       + sum_{J subset I, g1} w(J) <tau_i tau_J>_{g1} <tau_j tau_{I\J}>_{g-g1} ]
Rational WkTable::dvv(int g, const Partition& I) {
  const int top = I.back();
  const int k = top - 1;
  if (k < 1) throw std::logic_error("dvv: largest insertion below 2");
  Partition rest = remove_one(I, top);

  Rational val = 0;
  int prev = -1;
  for (int v : rest) {
    if (v == prev) continue;
    prev = v;
    int m = multiplicity(rest, v);
    Rational c = double_factorial(2 * v + 2 * k + 1) / double_factorial(2 * v - 1);
    val += Rational(m) * c * correlator(g, insert_one(remove_one(rest, v), v + k));
  }

  auto subs = sub_multisets(rest);
  Rational quad = 0;
  for (int i = 0; i <= k - 1; ++i) {
    int j = k - 1 - i;
    Rational c = double_factorial(2 * i + 1) * double_factorial(2 * j + 1);
    Rational inner = correlator(g - 1, insert_one(insert_one(rest, i), j));
    for (const auto& [J, w] : subs) {
      for (int g1 = 0; g1 <= g; ++g1) {
        Rational a = correlator(g1, insert_one(J, i));
        if (a == 0) continue;
        Rational b = correlator(g - g1, insert_one(multiset_diff(rest, J), j));
        if (b == 0) continue;
        inner += w * a * b;
      }
    }
    quad += c * inner;
  }
  val += quad / 2;
  return val / double_factorial(2 * k + 3);
}

Rational WkTable::correlator_via_dvv(int g, Partition I) {
  I = sorted_partition(std::move(I));
  if (g < 0) return 0;
  const int n = static_cast<int>(I.size());
  if (2 * g - 2 + n <= 0) return 0;
  long sum = std::accumulate(I.begin(), I.end(), 0L);
  if (sum != 3L * g - 3 + n) return 0;
  if (I.empty() || I.back() < 2)
    throw std::invalid_argument("correlator_via_dvv: largest insertion below 2");
  return dvv(g, I);
}

Series wk_free_energy(const RingPtr& ring, WkTable& table) {
  if (ring->tsmall_end() == ring->tsmall_begin() || ring->hbar_slot() < 0)
    throw std::invalid_argument("wk_free_energy: ring needs t and hbar");
  const int idx_max = ring->tsmall_end() - ring->tsmall_begin() - 1;
  const int count_max = ring->policy().t_count_max;
  Series F = Series::zero(ring);
  for (int g = 0; g - 1 <= ring->hbar_max(); ++g) {
    for (int n = 0; n <= count_max; ++n) {
      if (2 * g - 2 + n <= 0) continue;
      int sum = 3 * g - 3 + n;
      if (sum < 0) continue;
      for (const auto& I : partitions_fixed(n, sum, idx_max)) {
        const Rational& c = table.correlator(g, I);
        if (c == 0) continue;
        Monomial m(ring->slots(), 0);
        m[ring->hbar_slot()] = static_cast<std::int16_t>(g - 1);
        for (int v : I) ++m[ring->tsmall_begin() + v];
        if (ring->fit(m) != RingContext::Fit::kOk) continue;
        F = F.add(Series::term(ring, m, c / aut_factor(I)));
      }
    }
  }
  return F;
}

Series wk_partition_function(const RingPtr& ring, WkTable& table) {
  return wk_free_energy(ring, table).exp_series();
}

Series wk_virasoro_apply(int k, const Series& Z) {
  const RingPtr& ring = Z.ring();
  if (ring->tsmall_end() == ring->tsmall_begin() || ring->hbar_slot() < 0)
    throw std::invalid_argument("virasoro: ring needs t and hbar");
  if (k < -1) throw std::invalid_argument("virasoro: k < -1");
  const int idx_max = ring->tsmall_end() - ring->tsmall_begin() - 1;

  Series out = Series::zero(ring);
  for (int i = 0; i <= idx_max; ++i) {
    int p = i + k;
    if (p < 0 || p > idx_max) continue;
    Rational c = double_factorial(2 * i + 2 * k + 1) /
                 (pow2(k + 1) * double_factorial(2 * i - 1));
    Series dZ = Z.derive(var_t(p));
    if (dZ.is_zero()) continue;
    out = out.add(dZ.mul(Series::variable(ring, var_t(i))).scale(c));
    if (i == 1) out = out.sub(dZ.scale(c));  // shifted time t1 - 1
  }
  if (k >= 1) {
    Monomial up(ring->slots(), 0);
    up[ring->hbar_slot()] = 1;
    for (int i = 0; i <= k - 1; ++i) {
      int j = k - 1 - i;
      if (i > idx_max || j > idx_max) continue;
      Rational c = double_factorial(2 * i + 1) * double_factorial(2 * j + 1) /
                   pow2(k + 2);
      out = out.add(Z.derive(var_t(i)).derive(var_t(j)).shift(up, c));
    }
  } else if (k == -1) {
    Monomial down(ring->slots(), 0);
    down[ring->hbar_slot()] = -1;
    Series t0sq = Series::variable(ring, var_t(0)).pow(2);
    out = out.add(Z.mul(t0sq).shift(down, Rational(1, 2)));
  } else {  // k == 0
    out = out.add(Z.scale(Rational(1, 16)));
  }
  return out;
}

}  // namespace hbgw
