// Timing harness for the series product: OpenMP kernel vs the serial
// reference, on randomly filled boxes of growing size. Both results are
// compared term-by-term before any timing is reported.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "hbgw/series.hpp"

using namespace hbgw;
using clock_type = std::chrono::steady_clock;

namespace {

RingPtr bench_ring() {
  TruncationPolicy p;
  p.genus_max = 4;
  p.t_count_max = 12;
  p.t_index_max = 8;
  p.x_degree_max = 0;
  p.aux_order = 0;
  p.hbar_min = -2;
  p.hbar_max = 4;
  p.tsmall_sum_max = 20;
  p.tsmall_index_max = 8;
  p.todd_weight_max = 0;
  p.nu_max = 0;
  VarSet v{.hbar2 = true, .tsmall = true};
  return ring_new(p, v);
}

void enumerate_t(const RingPtr& ring, Monomial& m, int slot, int sum, int count,
                 std::vector<Monomial>& out) {
  if (slot == ring->slots()) {
    out.push_back(m);
    return;
  }
  if (slot == ring->hbar_slot()) {
    // Half the window on each factor keeps every pairwise product inside
    // the hbar floor and cap.
    for (int h = ring->policy().hbar_min / 2; h <= ring->policy().hbar_max / 2;
         ++h) {
      m[slot] = static_cast<std::int16_t>(h);
      enumerate_t(ring, m, slot + 1, sum, count, out);
    }
    m[slot] = 0;
    return;
  }
  int idx = slot - ring->tsmall_begin();
  int emax = idx == 0 ? count : std::min(count, sum / idx);
  for (int e = 0; e <= emax; ++e) {
    m[slot] = static_cast<std::int16_t>(e);
    enumerate_t(ring, m, slot + 1, sum - idx * e, count - e, out);
  }
  m[slot] = 0;
}

Series random_series(const RingPtr& ring, const std::vector<Monomial>& pool,
                     int terms, std::mt19937& rng) {
  std::vector<Monomial> picks = pool;
  std::shuffle(picks.begin(), picks.end(), rng);
  picks.resize(std::min<std::size_t>(terms, picks.size()));
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  Series s = Series::zero(ring);
  for (const Monomial& m : picks) {
    int n = num(rng);
    if (n == 0) n = 1;
    s = s.add(Series::term(ring, m, rat(n, den(rng))));
  }
  return s;
}

double time_once(const Series& a, const Series& b, bool serial) {
  auto t0 = clock_type::now();
  Series r = serial ? a.mul_serial(b) : a.mul(b);
  auto t1 = clock_type::now();
  volatile auto keep = r.terms().size();
  (void)keep;
  return std::chrono::duration<double>(t1 - t0).count();
}

double best_of(int reps, const Series& a, const Series& b, bool serial) {
  double best = 1e30;
  for (int i = 0; i < reps; ++i) best = std::min(best, time_once(a, b, serial));
  return best;
}

}  // namespace

int main() {
  std::mt19937 rng(987654321);
  RingPtr ring = bench_ring();
  std::vector<Monomial> pool;
  Monomial m(ring->slots(), 0);
  enumerate_t(ring, m, 0, ring->policy().tsmall_sum_max,
              ring->policy().t_count_max, pool);
  std::printf("box holds %zu monomials\n", pool.size());
  std::printf("%8s %8s %10s %12s %12s %8s\n", "terms-a", "terms-b", "product",
              "serial[s]", "openmp[s]", "speedup");
  for (int terms : {100, 400, 1200, 3000}) {
    Series a = random_series(ring, pool, terms, rng);
    Series b = random_series(ring, pool, terms, rng);
    Series ps = a.mul_serial(b);
    Series pp = a.mul(b);
    if (!(ps == pp)) {
      std::printf("kernel mismatch at %d terms\n", terms);
      return 1;
    }
    double ts = best_of(2, a, b, true);
    double tp = best_of(2, a, b, false);
    std::printf("%8zu %8zu %10zu %12.4f %12.4f %8.2f\n", a.terms().size(),
                b.terms().size(), ps.terms().size(), ts, tp, ts / tp);
  }
  return 0;
}
