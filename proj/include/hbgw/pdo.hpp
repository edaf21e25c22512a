#pragma once

#include <map>

#include "hbgw/gbgw.hpp"
#include "hbgw/report.hpp"
#include "hbgw/series.hpp"
#include "hbgw/wk.hpp"

namespace hbgw {

// Truncated pseudodifferential operator sum_k a_k d^k in a single spatial
// derivation d, with Series coefficients. Symbols below `floor` are
// dropped; a composition is therefore only trustworthy on symbols at or
// above floor plus the order of the left factor. Binary operations require
// matching ring, spatial variable and floor.
struct Pdo {
  RingPtr ring;
  VarId spatial{};
  int floor = 0;
  std::map<int, Series> sym;
};

Pdo pdo_zero(RingPtr ring, VarId spatial, int floor);
Pdo pdo_monomial(const Series& coeff, int order, VarId spatial, int floor);
Pdo pdo_add(const Pdo& a, const Pdo& b);
Pdo pdo_sub(const Pdo& a, const Pdo& b);
Pdo pdo_scale(const Pdo& a, const Rational& c);
/// Composition via d^k (a .) = sum_j C(k,j) a^{(j)} d^{k-j} with the
/// generalized binomial, truncated at the floor.
Pdo pdo_mul(const Pdo& a, const Pdo& b);
/// Symbols of nonnegative order (the differential-operator part).
Pdo pdo_plus_part(const Pdo& a);
Pdo pdo_commutator(const Pdo& a, const Pdo& b);

/// Scaled Lax operator d^2 + 2u.
Pdo pdo_lax(const Series& u, VarId spatial, int floor);
/// Square root d + u d^-1 - (u'/2) d^-2 + ... of the scaled Lax operator,
/// fixed one symbol at a time down to the floor.
Pdo pdo_sqrt_lax(const Series& u, VarId spatial, int floor);

/// Right-hand side of the scaled odd flow
///   du/dT_{2a+1} = hbar^{2a}/(2 (2a+1)!!) [(L^{(2a+1)/2})_+, L],
/// L = d^2 + 2u. The commutator must reduce to a multiplication operator;
/// a surviving derivation part throws logic_error. For a >= 1 the ring has
/// to carry the hbar^2 variable.
Series kdv_flow_rhs(const Series& u, VarId spatial, int a);

/// Flow i of u = d^2 F / dt_0^2 for the psi-intersection free energy,
/// checked against the t_i derivative on a t-box with the given count and
/// index-sum caps; genus_max sets the hbar window of the comparison.
VerificationReport verify_kdv_flow_wk(int i, int genus_max, int count,
                                      int sum_max, WkTable& wk);

/// Flow a of u = d^2 F / dT_1^2 for the cut-and-join free energy, checked
/// on the engine ring shrunk by the derivative margin.
VerificationReport verify_kdv_flow_gbgw(int a, const GbgwEngine& engine);

/// T_1-sector initial data: d^2 F / dT_1^2 restricted to T_3 = T_5 = ... = 0
/// equals (1/8 - nu/2) / (1 - T_1)^2.
VerificationReport verify_tau_initial(const GbgwEngine& engine);

}  // namespace hbgw
