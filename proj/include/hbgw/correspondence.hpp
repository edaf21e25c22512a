#pragma once

#include "hbgw/gbgw.hpp"
#include "hbgw/hodge.hpp"
#include "hbgw/report.hpp"

namespace hbgw {

// Substitution sending the psi-side time t_i into the odd-times frame:
//   t_i = delta_{i,0} x + delta_{i,1} - (-1/2)^{i-1}
//         - 2 sum_a (-(2a+1)/2)^i T_{2a+1} / a!.
// The i = 0 constant -(-1/2)^{-1} = 2 is folded into the linear part,
// so constant = 0 for i <= 1 and the i = 0 linear part starts with X = x+2.
struct SubstitutionRule {
  int index = 0;
  Rational constant;
  Series linear;  // in X and the odd times
};

SubstitutionRule t_sub(const RingPtr& ring, int i);

/// Quadratic shift
///   A(x,T) = (1/2) sum_{a,b} Tt_{2a+1} Tt_{2b+1} / (a! b! (a+b+1))
///            - x sum_b Tt_{2b+1} / (b! (2b+1)),
/// with Tt_{2a+1} = T_{2a+1} - delta_{a,0}.
Series A_series(const RingPtr& ring);

/// Left side of the correspondence at the free-energy level:
/// A/hbar^2 + sum_g (-4)^{g-1} hbar^{2g-2} H_g(t(x,T)), where H_g is the
/// genus-g Hodge free energy. Assembled as a finite sum of connected
/// coefficients times substitution-rule products: for a target (X,T)-degree
/// d, the number of constant-bearing insertions is at most 3g-3+d because
/// the t_0 and t_1 rules have no constant term.
Series hodge_side_free_energy(const RingPtr& ring, HodgeEngine& hodge);

/// Coefficientwise equality of the two sides of the correspondence over
/// the ring's box. The right side is the B-series plus the substituted
/// cut-and-join free energy.
VerificationReport verify_main(const RingPtr& ring, HodgeEngine& hodge,
                               const GbgwEngine& engine);

/// Decorated Hodge integral behind the correlator formula: genus g,
/// marked points 1/(1 + (2a_p+1)/2 psi) for each part plus `extra` plain
/// points, against exp(sum_d s_d kappa_d) with s_d = -(1/d)(-1/2)^d.
/// No prefactor. Vanishes for extra > 2|a|-2g+2 (and for every `extra`
/// when |a| < g-1).
Rational elsv_integral(int g, const Partition& a, int extra, HodgeEngine& hodge);

/// Intersection-number value of the correlator c_g(a):
/// (-1)^{g-1+l} 2^{2g-2+l} / ((2|a|-2g+2)! prod a_p!) times the decorated
/// integral with 2|a|-2g+2 plain points. Requires |a| >= g-1.
Rational elsv_rhs(int g, const Partition& a, HodgeEngine& hodge);

/// c_g(a) == elsv_rhs for all g <= g_max, 1 <= l <= len_max, |a| <= total_max
/// (skipping |a| < g-1), plus a sample of the beyond-top vanishing checks.
VerificationReport verify_elsv(int g_max, int total_max, int len_max,
                               const GbgwEngine& engine, HodgeEngine& hodge);

/// -B_{2g}/(2g(2g-2)8^{g-1}), the closed form of the vacuum integral.
Rational elsv_constant_target(int g);

/// Vacuum check for g >= 2: the decorated integral over the unmarked moduli
/// space equals elsv_constant_target(g).
VerificationReport elsv_constant(int g, HodgeEngine& hodge);

}  // namespace hbgw
