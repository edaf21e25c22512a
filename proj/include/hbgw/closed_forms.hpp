#pragma once

#include "hbgw/gbgw.hpp"
#include "hbgw/report.hpp"
#include "hbgw/wk.hpp"

namespace hbgw {

// Genus-zero data in the x frame. Q is the unique solution of
//   Q = -x/2 + sum_a T_{2a+1} Q^{2a+1} / a!
// with Q(x, 0) = 1 - X/2; y = Q^2 and u = -2 log Q.
struct QData {
  Series q;
  Series y;
  Series u;
};

/// Solves the Q equation by fixed-point iteration (one T-order per pass).
QData solve_q(const RingPtr& ring);

/// Q + x/2 - sum_a T_{2a+1} Q^{2a+1}/a!. Identically zero on the box.
Series q_equation_residual(const QData& qd);

/// dQ/dT_{2a+1} + (2/a!) Q^{2a+1} dQ/dx. Zero away from the box boundary;
/// callers solve on an enlarged box and restrict before comparing.
Series q_flow_residual(const QData& qd, int a);

/// dy/dT_{2a+1} - (y^a/a!) dy/dT_1, the reduction of every odd flow of y to
/// the first one.
Series y_flow_residual(const QData& qd, int a);

/// Genus-zero free energy in terms of Q:
///   (1/2) sum_{a,b} Tt_{2a+1} Tt_{2b+1} Q^{2a+2b+2}/(a! b! (a+b+1))
///   - x sum_b Tt_{2b+1} Q^{2b+1}/(b! (2b+1)) + (x^2/4) log Q.
Series f0_closed(const QData& qd);

/// Genus-zero free energy as an explicit sum over T-monomials:
///   x^2/4 log(-x/2) - 3x^2/8 - (x^2/4) log(1-T_1)
///   + sum_{k>=1} sum_{j_1+2j_2+...=k} (m-1)!/(2^{2k+1}(1-T_1)^m)
///     * x^{2k+2}/(2k+2)! * prod_i T_{2i+1}^{j_i}/((i!)^{j_i} j_i!),
/// with m = sum_i (2i+1) j_i.
Series f0_alexandrov(const RingPtr& ring);

/// (1/24) log(du/dx) - u/16.
Series f1_u_jet(const QData& qd);

/// (1/24) log((dy/dT_1)/2); the halving absorbs the -log(2)/24 constant.
Series f1_y_jet(const QData& qd);

/// Itzykson-Zuber variable I_k, k >= 1, in closed form:
///   delta_{k,1} - x (-1)^k (2k-1)!!/(2^{k+1} Q^{2k+1})
///   + sum_a Q^{2a} T_{2a+2k+1}/a!.
Series iz_variable(const QData& qd, int k);

/// Genus-g free energy from the I_k change of variables (g = 1 or 2):
///   g=1: (1/24) log(1/(2(1-I_1)));
///   g=2: (1-I_1)^{-2} [ <t4> e_4 + <t2 t3> e_2 e_3 + <t2^3> e_2^3/6 ],
/// with e_k = I_k/(1-I_1) and the brackets taken from the psi-class table.
Series iz_free_energy(const QData& qd, int g, WkTable& wk);

/// Three-way genus-zero equality: f0_closed == f0_alexandrov == the
/// hbar^{-2} slice of the cut-and-join free energy, on the policy's box.
VerificationReport verify_f0(const TruncationPolicy& policy,
                             const GbgwEngine& engine);

/// Both genus-one jet forms against the hbar^0 slice.
VerificationReport verify_f1(const TruncationPolicy& policy,
                             const GbgwEngine& engine);

/// Genus-one and genus-two identities in the I_k variables against the
/// cut-and-join slices.
VerificationReport verify_iz(const TruncationPolicy& policy,
                             const GbgwEngine& engine, WkTable& wk);

/// Vacuum kappa-class integral int exp(sum_d sbar_d kappa_d) over genus g
/// against (-1)^g B_{2g}/(2g(2g-2)), with the sbar_d defined by
/// exp(-sum_d sbar_d z^d) = sum_d (-1)^d (2d+1)!! z^d.
VerificationReport kw_bernoulli_check(int g, WkTable& wk);

}  // namespace hbgw
