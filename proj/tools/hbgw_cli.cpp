// Command-line front end: exact correlator tables and verification targets
// over configurable truncation boxes. Exit status is 0 for success, 1 for a
// verification or audit failure, 2 for usage, range or I/O errors.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hbgw/cache.hpp"
#include "hbgw/closed_forms.hpp"
#include "hbgw/correspondence.hpp"
#include "hbgw/jets.hpp"
#include "hbgw/pdo.hpp"

namespace {

using namespace hbgw;

constexpr int kGenusGuard = 4;
constexpr int kCapGuard = 24;

struct TableRow {
  std::string kind;
  int g = 0;
  Partition idx;
  Rational value;
};

std::string join_indices(const Partition& idx) {
  std::ostringstream out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out << ' ';
    out << idx[i];
  }
  return out.str();
}

void emit_rows(const std::vector<TableRow>& rows, const std::string& format) {
  if (format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json row;
      row["kind"] = r.kind;
      row["genus"] = r.g;
      row["indices"] = r.idx;
      row["value"] = r.value.get_str();
      arr.push_back(row);
    }
    std::cout << arr.dump(2) << '\n';
  } else if (format == "csv") {
    std::cout << "kind,genus,indices,value\n";
    for (const auto& r : rows)
      std::cout << r.kind << ',' << r.g << ",\"" << join_indices(r.idx)
                << "\"," << r.value.get_str() << '\n';
  } else {
    std::cout << "| kind | genus | indices | value |\n|---|---|---|---|\n";
    for (const auto& r : rows)
      std::cout << "| " << r.kind << " | " << r.g << " | "
                << join_indices(r.idx) << " | " << r.value.get_str()
                << " |\n";
  }
}

std::optional<std::pair<int, int>> parse_range(const std::string& text) {
  auto number = [](const std::string& s, int& out) {
    if (s.empty()) return false;
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    out = std::stoi(s);
    return true;
  };
  std::size_t dots = text.find("..");
  int lo = 0, hi = 0;
  if (dots == std::string::npos) {
    if (!number(text, lo)) return std::nullopt;
    return std::make_pair(lo, lo);
  }
  if (!number(text.substr(0, dots), lo)) return std::nullopt;
  if (!number(text.substr(dots + 2), hi)) return std::nullopt;
  return std::make_pair(lo, hi);
}

/// Sorted multisets of the given length with entries in [0, max_entry].
void enumerate_multisets(int length, int max_entry, int least, Partition& cur,
                         const std::function<void(const Partition&)>& fn) {
  if (length == 0) {
    fn(cur);
    return;
  }
  for (int v = least; v <= max_entry; ++v) {
    cur.push_back(v);
    enumerate_multisets(length - 1, max_entry, v, cur, fn);
    cur.pop_back();
  }
}

RingPtr main_ring(int gmax, int count, int idx, int xdeg) {
  TruncationPolicy p;
  p.genus_max = gmax;
  p.t_count_max = count;
  p.t_index_max = idx;
  p.x_degree_max = xdeg;
  p.hbar_min = -1;
  p.todd_weight_max = count * (2 * idx + 1);
  p.tsmall_index_max = 0;
  p.tsmall_sum_max = 0;
  p.nu_max = 0;
  p.aux_order = 0;
  VarSet v;
  v.x = v.hbar2 = v.todd = true;
  return ring_new(p, v);
}

struct CorrelatorsOpts {
  std::string kind;
  std::string g_range = "0..2";
  int i_max = 8;
  int n_max = 3;
  int a_max = 2;
  int len_max = 2;
  std::string format = "markdown";
  std::string cache_path;
  bool audit = false;
  bool allow_large = false;
};

int run_correlators(const CorrelatorsOpts& o) {
  auto range = parse_range(o.g_range);
  if (!range) {
    std::cerr << "correlators: bad genus range '" << o.g_range << "'\n";
    return 2;
  }
  auto [glo, ghi] = *range;
  if (ghi > kGenusGuard && !o.allow_large) {
    std::cerr << "correlators: genus " << ghi << " beyond guard "
              << kGenusGuard << " (pass --allow-large to override)\n";
    return 2;
  }
  if (o.i_max < 0 || o.n_max < 0 || o.a_max < 0 || o.len_max < 0) {
    std::cerr << "correlators: negative bound\n";
    return 2;
  }

  std::vector<TableRow> rows;
  CorrelatorCache::Kind cache_kind = CorrelatorCache::Kind::Wk;
  if (o.kind == "wk") {
    WkTable wk;
    for (int g = glo; g <= ghi; ++g)
      for (int n = 1; n <= o.n_max; ++n) {
        if (g == 0 && n < 3) continue;
        int target = 3 * g - 3 + n;
        Partition cur;
        enumerate_multisets(n, o.i_max, 0, cur, [&](const Partition& I) {
          int sum = 0;
          for (int v : I) sum += v;
          if (sum != target) return;
          rows.push_back({"wk", g, I, wk.correlator(g, I)});
        });
      }
  } else if (o.kind == "hodge") {
    cache_kind = CorrelatorCache::Kind::Hodge;
    WkTable wk;
    HodgeEngine hodge(wk);
    for (int g = glo; g <= ghi; ++g)
      for (int n = 1; n <= o.n_max; ++n) {
        if (g == 0 && n < 3) continue;
        Partition cur;
        enumerate_multisets(n, o.i_max, 0, cur, [&](const Partition& I) {
          int sum = 0;
          for (int v : I) sum += v;
          int lam = 3 * g - 3 + n - sum;
          if (lam < 0 || lam > 3 * g) return;
          rows.push_back({"hodge", g, I, hodge.hodge_correlator(g, I)});
        });
      }
  } else if (o.kind == "gbgw") {
    cache_kind = CorrelatorCache::Kind::GbgwC;
    int cap = o.len_max * (2 * o.a_max + 1);
    if (cap > kCapGuard && !o.allow_large) {
      std::cerr << "correlators: weight cap " << cap << " beyond guard "
                << kCapGuard << " (pass --allow-large to override)\n";
      return 2;
    }
    GbgwEngine engine(std::max(cap, 1));
    for (int g = glo; g <= ghi; ++g)
      for (int l = 1; l <= o.len_max; ++l) {
        Partition cur;
        enumerate_multisets(l, o.a_max, 0, cur, [&](const Partition& a) {
          rows.push_back({"gbgw", g, a, engine.correlator_c(g, a)});
        });
      }
  } else {
    std::cerr << "correlators: unknown kind '" << o.kind << "'\n";
    return 2;
  }

  int status = 0;
  if (!o.cache_path.empty()) {
    CorrelatorCache cache;
    if (std::ifstream probe(o.cache_path); probe.good()) {
      try {
        cache = cache_load(o.cache_path);
      } catch (const std::runtime_error& e) {
        std::cerr << e.what() << '\n';
        return 2;
      }
    }
    if (o.audit) {
      for (const auto& r : rows)
        if (auto cached = cache.lookup(cache_kind, r.g, r.idx);
            cached && *cached != r.value) {
          std::cerr << "audit: " << r.kind << " g=" << r.g << " ["
                    << join_indices(r.idx) << "] cached "
                    << cached->get_str() << " recomputed "
                    << r.value.get_str() << '\n';
          status = 1;
        }
    }
    for (const auto& r : rows) cache.insert(cache_kind, r.g, r.idx, r.value);
    try {
      cache_store(o.cache_path, cache);
    } catch (const std::runtime_error& e) {
      std::cerr << e.what() << '\n';
      return 2;
    }
  }
  emit_rows(rows, o.format);
  return status;
}

struct VerifyOpts {
  std::string target;
  int genus_max = 2;
  int t_count = 3;
  int t_index = 2;
  int x_deg = 5;
  int aux_order = 8;
  int cap = 0;  // 0 = per-target default
  int flow_a = 1;
  int genus = 2;
  int sum_max = 6;
  int order = 8;
  std::string format = "markdown";
  bool allow_large = false;
};

int run_verify(const VerifyOpts& o) {
  if ((o.genus_max > kGenusGuard || o.genus > kGenusGuard) && !o.allow_large) {
    std::cerr << "verify: genus beyond guard " << kGenusGuard
              << " (pass --allow-large to override)\n";
    return 2;
  }
  int auto_cap = o.t_count * (2 * o.t_index + 1);
  if (o.cap > kCapGuard && !o.allow_large) {
    std::cerr << "verify: weight cap " << o.cap << " beyond guard "
              << kCapGuard << " (pass --allow-large to override)\n";
    return 2;
  }
  TruncationPolicy policy;
  policy.genus_max = o.genus_max;
  policy.t_count_max = o.t_count;
  policy.t_index_max = o.t_index;
  policy.x_degree_max = o.x_deg;
  policy.aux_order = o.aux_order;

  VerificationReport rep;
  try {
    if (o.target == "main") {
      WkTable wk;
      HodgeEngine hodge(wk);
      GbgwEngine engine(o.cap ? o.cap : auto_cap);
      rep = verify_main(main_ring(o.genus_max, o.t_count, o.t_index, o.x_deg),
                        hodge, engine);
    } else if (o.target == "virasoro") {
      int cap = o.cap ? o.cap : 8;
      GbgwEngine engine(cap);
      rep.name = "virasoro";
      for (int m = 0; m <= 3; ++m) {
        // The image is only trustworthy below the weight the operator can
        // pull in from beyond the cap.
        TruncationPolicy pm = engine.ring()->policy();
        pm.todd_weight_max = std::max(cap - 2 * m - 1, 0);
        RingPtr rt = ring_new(pm, engine.ring()->active());
        Series image =
            gbgw_virasoro_apply(m, engine.partition_function()).restrict_to(rt);
        rep.merge(compare_series("L" + std::to_string(m), image,
                                 Series::zero(rt)));
        rep.checked += 1;  // count the operator even when the image is empty
      }
      rep.policy = policy_text(engine.ring()->policy());
    } else if (o.target == "elsv") {
      WkTable wk;
      HodgeEngine hodge(wk);
      int total = std::min(o.sum_max, 4);
      GbgwEngine engine(o.cap ? o.cap : 2 * total + 3);
      rep = verify_elsv(std::min(o.genus_max, 2), total, 3, engine, hodge);
    } else if (o.target == "elsv-const") {
      WkTable wk;
      HodgeEngine hodge(wk);
      rep = elsv_constant(o.genus, hodge);
    } else if (o.target == "f0") {
      GbgwEngine engine(o.cap ? o.cap : auto_cap);
      rep = verify_f0(policy, engine);
    } else if (o.target == "f1") {
      GbgwEngine engine(o.cap ? o.cap : auto_cap);
      rep = verify_f1(policy, engine);
    } else if (o.target == "os-jets") {
      WkTable wk;
      rep = verify_loop_wk(o.sum_max, wk);
      GbgwEngine engine(o.cap ? o.cap : auto_cap);
      rep.merge(verify_loop_gbgw(policy, engine));
      rep.name = "os-jets";
    } else if (o.target == "iz") {
      WkTable wk;
      GbgwEngine engine(o.cap ? o.cap : auto_cap);
      rep = verify_iz(policy, engine, wk);
    } else if (o.target == "kdv") {
      WkTable wk;
      rep = verify_kdv_flow_wk(o.flow_a, o.genus_max + 1, o.t_count + 1,
                               o.sum_max, wk);
      GbgwEngine engine(o.cap ? o.cap : 8);
      rep.merge(verify_kdv_flow_gbgw(o.flow_a, engine));
      rep.name = "kdv";
    } else if (o.target == "tau-initial") {
      GbgwEngine engine(o.cap ? o.cap : 8);
      rep = verify_tau_initial(engine);
    } else if (o.target == "phi-ratio") {
      Series res = phi_ratio_residual(o.order);
      rep = compare_series("phi-ratio", res, Series::zero(res.ring()));
      rep.checked = std::max(rep.checked, static_cast<long>(o.order));
    } else if (o.target == "kw-bernoulli") {
      WkTable wk;
      rep = kw_bernoulli_check(o.genus, wk);
    } else {
      std::cerr << "verify: unknown target '" << o.target << "'\n";
      return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "verify: " << e.what() << '\n';
    return 2;
  }

  if (o.format == "json")
    std::cout << report_json(rep) << '\n';
  else if (o.format == "csv")
    std::cout << report_csv(rep) << '\n';
  else
    std::cout << report_markdown(rep) << '\n';
  std::cerr << report_line(rep) << '\n';
  return rep.pass() ? 0 : 1;
}

/// Flat `key = value` configuration, applied before flag parsing so flags
/// win. Keys are long option names without the leading dashes.
int apply_config(const std::string& path, CorrelatorsOpts& c, VerifyOpts& v) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "config: cannot open " << path << '\n';
    return 2;
  }
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = line;
    if (auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
    auto trim = [](std::string t) {
      t.erase(0, t.find_first_not_of(" \t\r"));
      auto end = t.find_last_not_of(" \t\r");
      t.erase(end == std::string::npos ? 0 : end + 1);
      return t;
    };
    s = trim(s);
    if (s.empty()) continue;
    auto eq = s.find('=');
    if (eq == std::string::npos) {
      std::cerr << "config: " << path << ":" << lineno << ": expected key = value\n";
      return 2;
    }
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    auto as_int = [&](int& slot) {
      try {
        slot = std::stoi(value);
        return true;
      } catch (const std::exception&) {
        return false;
      }
    };
    auto as_bool = [&](bool& slot) {
      if (value == "true" || value == "1") return slot = true, true;
      if (value == "false" || value == "0") return slot = false, true;
      return false;
    };
    bool ok = true;
    if (key == "kind") c.kind = value;
    else if (key == "g") c.g_range = value;
    else if (key == "i-max") ok = as_int(c.i_max);
    else if (key == "n-max") ok = as_int(c.n_max);
    else if (key == "a-max") ok = as_int(c.a_max);
    else if (key == "len-max") ok = as_int(c.len_max);
    else if (key == "cache") c.cache_path = value;
    else if (key == "audit") ok = as_bool(c.audit);
    else if (key == "format") c.format = v.format = value;
    else if (key == "allow-large") { ok = as_bool(c.allow_large); v.allow_large = c.allow_large; }
    else if (key == "genus-max") ok = as_int(v.genus_max);
    else if (key == "t-count") ok = as_int(v.t_count);
    else if (key == "t-index") ok = as_int(v.t_index);
    else if (key == "x-deg") ok = as_int(v.x_deg);
    else if (key == "aux-order") ok = as_int(v.aux_order);
    else if (key == "cap") ok = as_int(v.cap);
    else if (key == "a") ok = as_int(v.flow_a);
    else if (key == "genus") ok = as_int(v.genus);
    else if (key == "sum-max") ok = as_int(v.sum_max);
    else if (key == "order") ok = as_int(v.order);
    else {
      std::cerr << "config: " << path << ":" << lineno << ": unknown key '"
                << key << "'\n";
      return 2;
    }
    if (!ok) {
      std::cerr << "config: " << path << ":" << lineno << ": bad value for '"
                << key << "'\n";
      return 2;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CorrelatorsOpts copts;
  VerifyOpts vopts;

  // The config file is located before CLI11 runs, so every flag given on
  // the command line overrides its config value.
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    std::string path;
    if (arg == "--config" && i + 1 < argc) path = argv[i + 1];
    else if (arg.rfind("--config=", 0) == 0) path = arg.substr(9);
    else continue;
    if (int rc = apply_config(path, copts, vopts); rc != 0) return rc;
  }

  CLI::App app{"Exact-rational tables and verifications for the Hodge-BGW engine"};
  app.add_option("--config", "Flat key = value configuration file");

  auto* corr = app.add_subcommand("correlators", "Print an exact correlator table");
  corr->add_option("--kind", copts.kind, "wk | hodge | gbgw")->required();
  corr->add_option("--g", copts.g_range, "Genus or range lo..hi");
  corr->add_option("--i-max", copts.i_max, "Largest psi index (wk, hodge)");
  corr->add_option("--n-max", copts.n_max, "Most insertions (wk, hodge)");
  corr->add_option("--a-max", copts.a_max, "Largest odd-time index (gbgw)");
  corr->add_option("--len-max", copts.len_max, "Longest index tuple (gbgw)");
  corr->add_option("--format", copts.format, "json | csv | markdown")
      ->check(CLI::IsMember({"json", "csv", "markdown"}));
  corr->add_option("--cache", copts.cache_path, "Correlator cache file");
  corr->add_flag("--audit", copts.audit, "Recompute cached keys and compare");
  corr->add_flag("--allow-large", copts.allow_large, "Lift the size guards");

  auto* ver = app.add_subcommand("verify", "Run a verification target");
  ver->add_option("target", vopts.target,
                  "main | virasoro | elsv | elsv-const | f0 | f1 | os-jets | "
                  "iz | kdv | tau-initial | phi-ratio | kw-bernoulli")
      ->required();
  ver->add_option("--genus-max", vopts.genus_max, "Genus cap of the box");
  ver->add_option("--t-count", vopts.t_count, "Most odd-time factors");
  ver->add_option("--t-index", vopts.t_index, "Largest odd-time index");
  ver->add_option("--x-deg", vopts.x_deg, "x-degree cap");
  ver->add_option("--aux-order", vopts.aux_order, "Auxiliary expansion order");
  ver->add_option("--cap", vopts.cap, "Engine weight cap (0 = per-target default)");
  ver->add_option("--a", vopts.flow_a, "Flow index (kdv)");
  ver->add_option("--g", vopts.genus, "Genus (elsv-const, kw-bernoulli)");
  ver->add_option("--sum-max", vopts.sum_max, "Index-sum cap (os-jets, kdv, elsv)");
  ver->add_option("--order", vopts.order, "Expansion order (phi-ratio)");
  ver->add_option("--format", vopts.format, "json | csv | markdown")
      ->check(CLI::IsMember({"json", "csv", "markdown"}));
  ver->add_flag("--allow-large", vopts.allow_large, "Lift the size guards");

  corr->fallthrough();
  ver->fallthrough();
  app.require_subcommand(1);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (corr->parsed()) return run_correlators(copts);
  return run_verify(vopts);
}
