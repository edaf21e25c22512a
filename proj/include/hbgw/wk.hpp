#pragma once

#include <map>

#include "hbgw/partitions.hpp"
#include "hbgw/series.hpp"

namespace hbgw {

// Memoized psi-class intersection numbers <tau_{i_1}...tau_{i_n}>_g computed
// by lowering the largest insertion: string for tau_0, dilaton for tau_1,
// and the three-point-derived recursion of the higher Virasoro flows
// otherwise. Dimension (sum = 3g-3+n) and stability gates make off-shell
// queries return 0.
class WkTable {
 public:
  const Rational& correlator(int g, Partition I);

  /// Forces the top step through the quadratic recursion (largest part must
  /// be >= 2) even when string or dilaton would apply; used to test that the
  /// reduction order does not matter.
  Rational correlator_via_dvv(int g, Partition I);

  std::size_t size() const { return memo_.size(); }

  /// Testing hook: overwrite a memoized value to check that downstream
  /// consumers actually depend on it.
  void poison(int g, Partition I, const Rational& value);

 private:
  Rational compute(int g, const Partition& I);
  Rational dvv(int g, const Partition& I);
  std::map<std::pair<int, Partition>, Rational> memo_;
};

/// Free energy sum over stable in-box (g, I) of
/// <tau_I>_g hbar^(g-1) t^I / aut(I), where the Hbar2 exponent tracks the
/// genus expansion parameter squared.
Series wk_free_energy(const RingPtr& ring, WkTable& table);

/// exp of the free energy.
Series wk_partition_function(const RingPtr& ring, WkTable& table);

/// Forward Virasoro operator L_k Z, k >= -1, in Z's ring. Derivatives that
/// would leave the ring are skipped, so the result is only trustworthy on
/// the window described by wk_virasoro_residual.
Series wk_virasoro_apply(int k, const Series& Z);

}  // namespace hbgw
