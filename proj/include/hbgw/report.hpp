#pragma once

#include <string>
#include <vector>

#include "hbgw/series.hpp"

namespace hbgw {

struct Mismatch {
  std::string monomial;
  Rational lhs;
  Rational rhs;
};

// Outcome of one verification target. `pass` iff no mismatches were
// recorded; `checked` counts the coefficient comparisons made.
struct VerificationReport {
  std::string name;
  std::string policy;
  long checked = 0;
  std::vector<Mismatch> failures;

  bool pass() const { return failures.empty(); }
  void check(const std::string& monomial, const Rational& lhs, const Rational& rhs);
  void merge(const VerificationReport& other);
};

/// Monomial name in the ring's slot order, "1" for the constant term.
std::string monomial_name(const RingPtr& ring, const Monomial& m);

/// Coefficientwise comparison over the union of the two term sets.
VerificationReport compare_series(const std::string& name, const Series& lhs,
                                  const Series& rhs);

std::string policy_text(const TruncationPolicy& p);

/// "name: PASS (n checked)" or "name: FAIL (k mismatches ...)".
std::string report_line(const VerificationReport& r);

std::string report_json(const VerificationReport& r);
std::string report_csv(const VerificationReport& r);
std::string report_markdown(const VerificationReport& r);

}  // namespace hbgw
