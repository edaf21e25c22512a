#include "hbgw/report.hpp"

#include <sstream>

#include "json.hpp"

namespace hbgw {

void VerificationReport::check(const std::string& monomial, const Rational& lhs,
                               const Rational& rhs) {
  ++checked;
  if (lhs != rhs) failures.push_back({monomial, lhs, rhs});
}

void VerificationReport::merge(const VerificationReport& other) {
  checked += other.checked;
  failures.insert(failures.end(), other.failures.begin(), other.failures.end());
}

std::string monomial_name(const RingPtr& ring, const Monomial& m) {
  std::ostringstream out;
  bool first = true;
  for (int s = 0; s < ring->slots(); ++s) {
    if (m[s] == 0) continue;
    if (!first) out << "*";
    first = false;
    out << ring->vars()[s].name();
    if (m[s] != 1) out << "^" << m[s];
  }
  if (first) out << "1";
  return out.str();
}

VerificationReport compare_series(const std::string& name, const Series& lhs,
                                  const Series& rhs) {
  VerificationReport r;
  r.name = name;
  r.policy = policy_text(lhs.ring()->policy());
  std::map<Monomial, std::pair<Rational, Rational>> both;
  for (const auto& [m, c] : lhs.terms()) both[m].first = c;
  for (const auto& [m, c] : rhs.terms()) both[m].second = c;
  for (const auto& [m, cc] : both)
    r.check(monomial_name(lhs.ring(), m), cc.first, cc.second);
  return r;
}

std::string policy_text(const TruncationPolicy& p) {
  std::ostringstream out;
  out << "genus<=" << p.genus_max << " t_count<=" << p.t_count_max
      << " t_index<=" << p.t_index_max << " x_deg<=" << p.x_degree_max
      << " aux<=" << p.aux_order;
  return out.str();
}

std::string report_line(const VerificationReport& r) {
  std::ostringstream out;
  if (r.pass()) {
    out << r.name << ": PASS (" << r.checked << " checked)";
  } else {
    const Mismatch& f = r.failures.front();
    out << r.name << ": FAIL (" << r.failures.size() << " of " << r.checked
        << " mismatched; first at " << f.monomial << ": " << to_string(f.lhs)
        << " vs " << to_string(f.rhs) << ")";
  }
  return out.str();
}

std::string report_json(const VerificationReport& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["policy"] = r.policy;
  j["status"] = r.pass() ? "pass" : "fail";
  j["checked"] = r.checked;
  j["failures"] = nlohmann::json::array();
  for (const Mismatch& f : r.failures)
    j["failures"].push_back({{"monomial", f.monomial},
                             {"lhs", to_string(f.lhs)},
                             {"rhs", to_string(f.rhs)}});
  return j.dump(2);
}

std::string report_csv(const VerificationReport& r) {
  std::ostringstream out;
  out << "name,policy,status,checked,monomial,lhs,rhs\n";
  if (r.failures.empty()) {
    out << r.name << "," << r.policy << ",pass," << r.checked << ",,,\n";
  } else {
    for (const Mismatch& f : r.failures)
      out << r.name << "," << r.policy << ",fail," << r.checked << ","
          << f.monomial << "," << to_string(f.lhs) << "," << to_string(f.rhs)
          << "\n";
  }
  return out.str();
}

std::string report_markdown(const VerificationReport& r) {
  std::ostringstream out;
  out << "## " << r.name << "\n\n"
      << "- policy: `" << r.policy << "`\n"
      << "- status: **" << (r.pass() ? "pass" : "fail") << "**\n"
      << "- coefficients checked: " << r.checked << "\n";
  if (!r.failures.empty()) {
    out << "\n| monomial | left | right |\n|---|---|---|\n";
    for (const Mismatch& f : r.failures)
      out << "| `" << f.monomial << "` | " << to_string(f.lhs) << " | "
          << to_string(f.rhs) << " |\n";
  }
  return out.str();
}

}  // namespace hbgw
