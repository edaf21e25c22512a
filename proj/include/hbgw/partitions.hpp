#pragma once

#include <utility>
#include <vector>

#include "hbgw/rational.hpp"

namespace hbgw {

// Multiset of nonnegative indices, kept sorted ascending.
using Partition = std::vector<int>;

Partition sorted_partition(Partition p);

/// Product of factorials of the multiplicities.
Rational aut_factor(const Partition& p);

/// Multiplicity of v in p.
int multiplicity(const Partition& p, int v);

/// p with one copy of v removed; v must be present.
Partition remove_one(const Partition& p, int v);

/// p with v inserted, order maintained.
Partition insert_one(const Partition& p, int v);

/// Multiset difference p minus q; q must be contained in p.
Partition multiset_diff(const Partition& p, const Partition& q);

/// All multisets of length n with parts in [0, max_part] summing to `sum`.
std::vector<Partition> partitions_fixed(int n, int sum, int max_part);

/// All sub-multisets J of p with the selection weight
/// prod_v C(mult_v(p), mult_v(J)), including the empty and full ones.
std::vector<std::pair<Partition, Rational>> sub_multisets(const Partition& p);

}  // namespace hbgw
