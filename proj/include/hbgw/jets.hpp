#pragma once

#include <map>
#include <string>
#include <vector>

#include "hbgw/gbgw.hpp"
#include "hbgw/report.hpp"
#include "hbgw/series.hpp"
#include "hbgw/wk.hpp"

namespace hbgw {

// Polynomial in jet variables with rational coefficients. Slot 0 holds the
// value jet (z_0 on the psi-intersection side, e^{u_0} on the exponential
// side), slot 1 the first jet, slot k >= 2 the k-th jet. Slot 1 is the only
// slot allowed a negative exponent. Keys are exponent vectors with trailing
// zeros trimmed, so the zero vector is the constant monomial.
class JetPoly {
 public:
  JetPoly() = default;

  static JetPoly constant(const Rational& c);
  static JetPoly monomial(std::vector<int> exps, const Rational& c);

  const std::map<std::vector<int>, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  JetPoly add(const JetPoly& o) const;
  JetPoly sub(const JetPoly& o) const;
  JetPoly scale(const Rational& c) const;
  JetPoly mul(const JetPoly& o) const;
  /// d/d(slot). Slot 1 exponents may pass through zero; any other slot
  /// simply loses terms without that variable.
  JetPoly derive(int slot) const;

  std::string to_text() const;

  friend bool operator==(const JetPoly& a, const JetPoly& b) {
    return a.terms_ == b.terms_;
  }

 private:
  void insert(std::vector<int> exps, const Rational& c);
  std::map<std::vector<int>, Rational> terms_;
};

/// The total first jet derivative sum_j (jet j+1) d/d(jet j). With
/// exponential_value the value slot holds an exponential, so its derivative
/// is the first jet times itself instead of a power drop.
JetPoly jet_d1(const JetPoly& p, bool exponential_value);

// Tail expansion in the spectral parameter: ord[p] multiplies lambda^{-p}.
// Binary operations require equal order counts.
class LoopExpansion {
 public:
  explicit LoopExpansion(int orders) : ord_(orders) {}

  int orders() const { return static_cast<int>(ord_.size()); }
  const JetPoly& at(int p) const { return ord_[p]; }
  JetPoly& at(int p) { return ord_[p]; }

  LoopExpansion add(const LoopExpansion& o) const;
  LoopExpansion mul(const LoopExpansion& o) const;
  LoopExpansion scale(const Rational& c) const;
  LoopExpansion scale_jet(const JetPoly& p) const;
  LoopExpansion d1(bool exponential_value) const;
  /// Multiply by lambda^{-s}, dropping orders past the window.
  LoopExpansion shifted(int s) const;

 private:
  std::vector<JetPoly> ord_;
};

// Loop-equation output. Genus one fixes the derivative data of the one-loop
// term, F_1 = log_coeff * log(jet 1) + value_slope * (value variable);
// genus two fixes the unique weighted-homogeneous jet polynomial f2 with
// weight sum k*m_k + e = 2 and degree sum (k-1)*m_k <= 3.
struct LoopSolution {
  int genus = 0;
  Rational value_slope;
  Rational log_coeff;
  JetPoly f2;
};

/// Solves the psi-intersection loop equation order by order in the spectral
/// parameter; genus 1 or 2. The linear system is overdetermined and its
/// consistency is checked, so a unique solution is part of the contract.
LoopSolution loop_solve_wk(int genus);

/// Same for the exponential side, where the spectral density expands in
/// powers of e^{u_0} and the genus-one term carries a linear u_0 part.
LoopSolution loop_solve_gbgw(int genus);

/// Evaluates a jet polynomial on concrete jets (jets[k] for slot k), all
/// over `ring`. Negative slot-1 exponents use the inverse of jets[1], so
/// its constant term must be nonzero.
Series jet_eval(const JetPoly& p, const RingPtr& ring,
                const std::vector<Series>& jets);

/// Genus-two loop solution evaluated on the jets of the genus-zero
/// potential d^2F_0/dt_0^2 against the direct correlator sum
/// sum_I <tau_I>_2 t^I / aut(I) with |I| <= sum_max.
VerificationReport verify_loop_wk(int sum_max, WkTable& wk);

/// Genus-two loop solution evaluated on the x-jets of u = -2 log Q against
/// the hbar^2 slice of the cut-and-join free energy on the policy's box.
VerificationReport verify_loop_gbgw(const TruncationPolicy& policy,
                                    const GbgwEngine& engine);

}  // namespace hbgw
