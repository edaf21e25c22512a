#pragma once

#include "hbgw/partitions.hpp"
#include "hbgw/series.hpp"
#include "hbgw/wk.hpp"

#include <optional>
#include <vector>

namespace hbgw {

// T/nu/hbar^2 ring sized so that every monomial of T-weight <= weight_cap
// is retained; the cut-and-join recursion is exact below the cap.
RingPtr gbgw_working_ring(int weight_cap);

// One application of the cut-and-join operator
//   W = sum_{a,b} (2a+2b+1)!!/((2a-1)!!(2b-1)!!) T_{2a+1} T_{2b+1} d_{2a+2b+1}
//     + (hbar^2/2) sum_{a,b} (2a+1)!!(2b+1)!!/(2a+2b+1)!! T_{2a+2b+3} d_a d_b
//     + (1/8 - nu/2) T_1
// on a series over a T/nu/hbar^2 ring. W raises the T-weight
// sum (2a+1) e_a by exactly one; terms leaving the box are dropped.
Series gbgw_cut_and_join_apply(const Series& s);

// Virasoro operator in the nu parametrization,
//   L_m = 2^{-2m-1} sum_a (2a+2m+1)!!/(2a-1)!! Ttilde_{2a+1} d_{2a+2m+1}
//       + 2^{-2m-2} hbar^2 sum_{a+b=m-1} (2a+1)!!(2b+1)!! d_a d_b
//       + (1/16 - nu/4) delta_{m,0},
// with Ttilde_{2a+1} = T_{2a+1} - delta_{a,0}. Annihilates the partition
// function where the truncated ring holds complete coefficients.
Series gbgw_virasoro_apply(int m, const Series& s);

// Builds the partition function of the deformed one-matrix ensemble as the
// stabilizing sum of cut-and-join iterates Z_k = W(Z_{k-1})/k inside a
// working ring whose T-weight is capped.
class GbgwEngine {
 public:
  explicit GbgwEngine(int weight_cap);

  int weight_cap() const { return cap_; }
  const RingPtr& ring() const { return ring_; }
  const std::vector<Series>& iterates() const { return zk_; }
  const Series& partition_function() const { return z_; }
  const Series& free_energy() const;  // log, computed on first use

  // Genus-g correlator attached to the index multiset a: the coefficient of
  // prod T_{2a_p+1} * nu^{|a|-g+1} * (hbar^2)^{|a|} in the free energy,
  // normalized by aut(a)/(-2)^{|a|-g+1}. Throws if the monomial exceeds the
  // working cap.
  Rational correlator_c(int g, const Partition& a) const;

 private:
  int cap_;
  RingPtr ring_;
  std::vector<Series> zk_;
  Series z_;
  mutable std::optional<Series> f_;
};

// Constant-in-T part of the free energy in the (x+2)-adic variable:
//   (1/hbar^2)(x^2/4 log(-x/2) - 3x^2/8) + (1/12) log(-x/2)
//   + sum_{g>=2} hbar^{2g-2} x^{2-2g} (-1)^g 2^{g-1} B_{2g}/(2g(2g-2)).
// The ring must carry X and Hbar2 with floor <= -1.
Series gbgw_B_series(const RingPtr& ring);

// Full free energy over an X/Hbar2/Todd ring: the B part plus the T-part of
// the engine's free energy with nu replaced by -(x^2)/(2 hbar^2).
Series gbgw_free_energy_x(const RingPtr& ring, const GbgwEngine& engine);

}  // namespace hbgw
