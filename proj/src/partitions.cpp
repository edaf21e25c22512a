#include "hbgw/partitions.hpp"

#include <algorithm>
#include <stdexcept>

namespace hbgw {

Partition sorted_partition(Partition p) {
  std::sort(p.begin(), p.end());
  return p;
}

Rational aut_factor(const Partition& p) {
  Rational r = 1;
  int run = 1;
  for (std::size_t i = 1; i <= p.size(); ++i) {
    if (i < p.size() && p[i] == p[i - 1]) {
      ++run;
      r *= run;
    } else {
      run = 1;
    }
  }
  return r;
}

int multiplicity(const Partition& p, int v) {
  auto [lo, hi] = std::equal_range(p.begin(), p.end(), v);
  return static_cast<int>(hi - lo);
}

Partition remove_one(const Partition& p, int v) {
  Partition q = p;
  auto it = std::lower_bound(q.begin(), q.end(), v);
  if (it == q.end() || *it != v)
    throw std::invalid_argument("remove_one: value not present");
  q.erase(it);
  return q;
}

Partition insert_one(const Partition& p, int v) {
  Partition q = p;
  q.insert(std::lower_bound(q.begin(), q.end(), v), v);
  return q;
}

Partition multiset_diff(const Partition& p, const Partition& q) {
  Partition r = p;
  for (int v : q) {
    auto it = std::lower_bound(r.begin(), r.end(), v);
    if (it == r.end() || *it != v)
      throw std::invalid_argument("multiset_diff: not a sub-multiset");
    r.erase(it);
  }
  return r;
}

namespace {

void fixed_rec(int n, int sum, int max_part, Partition& cur,
               std::vector<Partition>& out) {
  if (n == 0) {
    if (sum == 0) out.push_back(cur);
    return;
  }
  int hi = std::min(max_part, sum);
  int lo = cur.empty() ? 0 : cur.back();  // nondecreasing
  for (int v = lo; v <= hi; ++v) {
    if (v * n < sum - (n - 1) * max_part) continue;
    cur.push_back(v);
    fixed_rec(n - 1, sum - v, max_part, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Partition> partitions_fixed(int n, int sum, int max_part) {
  std::vector<Partition> out;
  if (n < 0 || sum < 0 || max_part < 0) return out;
  Partition cur;
  fixed_rec(n, sum, max_part, cur, out);
  return out;
}

std::vector<std::pair<Partition, Rational>> sub_multisets(const Partition& p) {
  // Distinct values with multiplicities.
  std::vector<std::pair<int, int>> vals;
  for (int v : p) {
    if (!vals.empty() && vals.back().first == v)
      ++vals.back().second;
    else
      vals.emplace_back(v, 1);
  }
  std::vector<std::pair<Partition, Rational>> out;
  out.emplace_back(Partition{}, Rational(1));
  for (auto [v, m] : vals) {
    std::vector<std::pair<Partition, Rational>> next;
    next.reserve(out.size() * (m + 1));
    for (const auto& [J, w] : out) {
      for (int e = 0; e <= m; ++e) {
        Partition J2 = J;
        for (int i = 0; i < e; ++i) J2.push_back(v);
        next.emplace_back(std::move(J2),
                          w * binomial(static_cast<long>(m), static_cast<long>(e)));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace hbgw
