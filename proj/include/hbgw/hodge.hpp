#pragma once

#include <functional>
#include <map>
#include <vector>

#include "hbgw/wk.hpp"

namespace hbgw {

/// Coefficient of the degree-(2j-1) generator in the transform linking the
/// psi-class and Hodge-class potentials: (2^{-2j} - 1) B_{2j} / (j (2j-1)).
Rational fp_coefficient(int j);

// Per-key evaluation of the Hodge-class potential obtained from the
// psi-class one by the exp of a sum of commuting quadratic-linear
// operators. Works on raw coefficients of exp-generating functions, so no
// truncation box is involved and every value is exact.
class HodgeEngine {
 public:
  explicit HodgeEngine(WkTable& wk) : wk_(wk) {}

  /// Coefficient of eps^{2h} t^I in the psi-class partition function.
  /// Vanishes unless sum(I) = 3h + |I|.
  const Rational& zwk(int h, Partition I);

  /// Coefficient of eps^{2h} t^I in the transformed partition function.
  const Rational& zh(int h, Partition I);

  /// Connected coefficient: eps^{2h} t^I of the transformed free energy
  /// (includes the 1/aut normalization of an exp generating function).
  const Rational& fh(int h, Partition I);

  /// <tau_I Omega>_g = aut(I) * fh(g-1, I).
  Rational hodge_correlator(int g, Partition I);

  WkTable& wk() { return wk_; }

 private:
  Rational compute_zwk(int h, const Partition& I);
  Rational zflow(int m, int h, const Partition& I);
  Rational compute_zflow(int m, int h, const Partition& I);
  Rational compute_fh(int h, const Partition& I);

  WkTable& wk_;
  std::map<std::pair<int, Partition>, Rational> zwk_, zh_, fh_;
  std::map<std::tuple<int, int, Partition>, Rational> flow_;
};

/// Independent reconstruction of a composite (exp-level) coefficient from a
/// connected-coefficient source by enumerating block multisets. Used to
/// cross-check the anchored recursions in the engine.
Rational composite_from_connected(
    int h, const Partition& I,
    const std::function<Rational(int, const Partition&)>& connected);

/// Forward operator on series in a (t, hbar) ring:
/// D_j = -sum_i t~_i d/dt_{i+2j-1} + (eps^2/2) sum_{a=0}^{2j-2} (-1)^a
///       d^2/dt_a dt_{2j-2-a},   t~_i = t_i - delta_{i,1}.
Series hodge_apply_D(int j, const Series& S);

/// exp(sum_j fp_coefficient(j) D_j) applied by nilpotent iteration.
Series hodge_apply_exp_G(const Series& S);

/// Free energy of the transformed potential assembled over the ring's box.
Series hodge_free_energy(const RingPtr& ring, HodgeEngine& engine);

/// Genus-zero one-point function v(t): v = t_0 + sum_{i>=1} t_i v^i / i!.
Series hodge_v(const RingPtr& ring);

/// Genus-zero transformed free energy,
/// (1/2) sum_{i,j} t~_i t~_j v^{i+j+1} / (i! j! (i+j+1)).
Series hodge_genus0(const RingPtr& ring);

/// Genus-one transformed free energy, (1/24) log dv/dt_0 - v/16.
Series hodge_genus1(const RingPtr& ring);

/// Translation data from kappa-class weights exp(sum_d s_d kappa_d) to
/// extra psi-points: b-series = 1 - exp(-s-series), so each extra point
/// carries sum_d b_d psi^{d+1}.
std::vector<Rational> kappa_b_from_s(const std::vector<Rational>& s);

/// Integral of Prod_p 1/(1 - w_p psi_p) * exp(sum_d s_d kappa_d) against the
/// correlator source `corr` (psi-class or Hodge-class). `b` holds the
/// translated kappa weights; a weight w_p = 0 marks a plain point.
Rational kappa_integral(int g, const std::vector<Rational>& weights,
                        const std::vector<Rational>& b,
                        const std::function<Rational(int, const Partition&)>& corr);

/// Residual of the reflection identity satisfied by the generating series
/// Phi(z) = exp(sum_k fp_coefficient(k) z^{1-2k}):
/// log Phi(z+1) - log Phi(z) - log(1 + 1/(2z)) + (1/2) log(1 + 1/z),
/// expanded in 1/z through the given order. Identically zero.
Series phi_ratio_residual(int order);

}  // namespace hbgw
