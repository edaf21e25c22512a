// End-to-end acceptance gate. Each criterion exercises one headline claim of
// the engine and prints a single PASS/FAIL line; the exit code is the number
// of failed criteria. The full run recomputes the heavy boxes and needs
// around six minutes on one core; --quick shrinks them to a smoke run.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <exception>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hbgw/closed_forms.hpp"
#include "hbgw/correspondence.hpp"
#include "hbgw/jets.hpp"
#include "hbgw/pdo.hpp"

using namespace hbgw;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

struct Context {
  bool quick = false;
  WkTable wk;
  HodgeEngine hodge{wk};
};

using clk = std::chrono::steady_clock;

double seconds_since(clk::time_point from) {
  return std::chrono::duration<double>(clk::now() - from).count();
}

std::string fmt_secs(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1fs", s);
  return buf;
}

std::string summarize(const VerificationReport& r) {
  std::ostringstream os;
  os << r.checked << " values";
  if (!r.pass())
    os << ", " << r.failures.size() << " mismatches, first at "
       << r.failures.front().monomial;
  return os.str();
}

int todd_weight(const RingPtr& ring, const Monomial& m) {
  int w = 0;
  for (int s = ring->todd_begin(); s < ring->todd_end(); ++s)
    w += (2 * (s - ring->todd_begin()) + 1) * m[s];
  return w;
}

RingPtr corr_ring(int gmax, int count, int idx, int xdeg) {
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

Series random_series(const RingPtr& ring, std::mt19937& rng, int max_terms) {
  std::uniform_int_distribution<int> nterms(0, max_terms);
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 9);
  Series s = Series::zero(ring);
  int want = nterms(rng);
  int attempts = 0;
  while (want > 0 && attempts < 200) {
    ++attempts;
    Monomial m(ring->slots(), 0);
    for (int slot = 0; slot < ring->slots(); ++slot) {
      int hi = slot == ring->hbar_slot() ? ring->hbar_max() : 2;
      std::uniform_int_distribution<int> e(0, hi);
      m[slot] = static_cast<std::int16_t>(e(rng));
    }
    if (ring->fit(m) != RingContext::Fit::kOk) continue;
    int n = num(rng);
    if (n == 0) continue;
    s = s.add(Series::term(ring, m, rat(n, den(rng))));
    --want;
  }
  return s;
}

// 1. The free-energy identity between the Hodge side and the substituted
// cut-and-join side, on the standard and the extended box.
Outcome crit_main(Context& cx) {
  std::ostringstream os;
  bool ok = true;
  {
    auto t0 = clk::now();
    auto ring = cx.quick ? corr_ring(2, 2, 1, 3) : corr_ring(2, 3, 2, 5);
    GbgwEngine engine(cx.quick ? 6 : 15);
    VerificationReport r = verify_main(ring, cx.hodge, engine);
    double secs = seconds_since(t0);
    bool in_budget = cx.quick || secs <= 120.0;
    ok = r.pass() && in_budget;
    os << (cx.quick ? "quick box " : "standard box ") << summarize(r) << " in "
       << fmt_secs(secs);
    if (!cx.quick) os << (in_budget ? " (limit 120s)" : " (OVER the 120s limit)");
  }
  if (!cx.quick) {
    auto t0 = clk::now();
    auto ring = corr_ring(3, 2, 1, 3);
    GbgwEngine engine(6);
    VerificationReport r = verify_main(ring, cx.hodge, engine);
    double secs = seconds_since(t0);
    bool in_budget = secs <= 900.0;
    ok = ok && r.pass() && in_budget;
    os << "; extended box " << summarize(r) << " in " << fmt_secs(secs)
       << (in_budget ? " (limit 900s)" : " (OVER the 900s limit)");
  }
  return {ok, os.str()};
}

// 2. The time-free constant term: Bernoulli closed forms for the hbar^2
// exponents -1..2, tied independently to the Hodge-side route.
Outcome crit_constant(Context& cx) {
  std::ostringstream os;
  TruncationPolicy p;
  p.genus_max = 3;
  p.t_count_max = 1;
  p.t_index_max = 0;
  p.todd_weight_max = 1;
  p.x_degree_max = 8;
  p.hbar_min = -1;
  p.hbar_max = 2;
  p.tsmall_index_max = 0;
  p.tsmall_sum_max = 0;
  p.nu_max = 0;
  p.aux_order = 0;
  VarSet v;
  v.x = v.hbar2 = v.todd = true;
  auto ring = ring_new(p, v);
  Series B = gbgw_B_series(ring);
  Series L = log_neg_half_x(ring);
  Series x2 = x_series(ring).mul(x_series(ring));
  Monomial down(ring->slots(), 0);
  down[ring->hbar_slot()] = -1;
  Monomial up(ring->slots(), 0);
  up[ring->hbar_slot()] = 1;
  Monomial up2(ring->slots(), 0);
  up2[ring->hbar_slot()] = 2;
  bool slices = B.hbar_part(-1) == x2.mul(L)
                                       .scale(rat(1, 4))
                                       .sub(x2.scale(rat(3, 8)))
                                       .shift(down, Rational(1)) &&
                B.hbar_part(0) == L.scale(rat(1, 12)) &&
                B.hbar_part(1) == x_power(ring, -2).shift(up, rat(-1, 120)) &&
                B.hbar_part(2) == x_power(ring, -4).shift(up2, rat(-1, 252));
  os << "closed sectors for genus 0..3 "
     << (slices ? "match" : "MISMATCH") << " on the degree-8 box";
  auto t0 = clk::now();
  auto r2 = corr_ring(2, 0, 0, cx.quick ? 4 : 8);
  bool tie2 = hodge_side_free_energy(r2, cx.hodge) == gbgw_B_series(r2);
  os << "; Hodge route agrees through genus 2 "
     << (tie2 ? "" : "FAILS ") << "in " << fmt_secs(seconds_since(t0));
  bool tie3 = true;
  if (!cx.quick) {
    auto r3 = corr_ring(3, 0, 0, 3);
    tie3 = hodge_side_free_energy(r3, cx.hodge) == gbgw_B_series(r3);
    os << " and at genus 3" << (tie3 ? "" : " FAILS");
  }
  return {slices && tie2 && tie3, os.str()};
}

// 3. Virasoro constraints on the partition function plus the commutator
// relations on a random series.
Outcome crit_virasoro(Context&) {
  const int cap = 8;
  GbgwEngine eng(cap);
  const auto& ring = eng.ring();
  bool annihilated = true;
  for (int m = 0; m <= 3; ++m) {
    Series r = gbgw_virasoro_apply(m, eng.partition_function());
    for (const auto& [mm, c] : r.terms()) {
      // The operator pulls weight down by 2m, so the image is only
      // trustworthy below the weight fed from beyond the cap.
      if (todd_weight(ring, mm) > cap - 2 * m - 1) continue;
      (void)c;
      annihilated = false;
    }
  }
  auto wring = gbgw_working_ring(13);
  std::mt19937 rng(571104);
  std::uniform_int_distribution<int> coeff(-9, 9);
  std::uniform_int_distribution<int> den(1, 7);
  Series s = Series::zero(wring);
  for (int term = 0; term < 6; ++term) {
    Monomial m(wring->slots(), 0);
    // Total weight stays small so both commutator routes act inside the box.
    int budget = 5;
    while (budget > 0) {
      int maxa = std::min(2, (budget - 1) / 2);
      int a = maxa == 0 ? 0 : std::uniform_int_distribution<int>(0, maxa)(rng);
      ++m[wring->todd_begin() + a];
      budget -= 2 * a + 1;
      if (std::uniform_int_distribution<int>(0, 1)(rng)) break;
    }
    m[wring->nu_slot()] = static_cast<std::int16_t>(rng() % 3);
    m[wring->hbar_slot()] = static_cast<std::int16_t>(rng() % 2);
    int c = coeff(rng);
    if (c == 0) c = 1;
    s = s.add(Series::term(wring, m, rat(c, den(rng))));
  }
  int pairs = 0;
  bool brackets = true;
  for (int m = 0; m <= 2; ++m)
    for (int n = m + 1; n <= 2; ++n) {
      Series lhs = gbgw_virasoro_apply(m, gbgw_virasoro_apply(n, s))
                       .sub(gbgw_virasoro_apply(n, gbgw_virasoro_apply(m, s)));
      Series rhs = gbgw_virasoro_apply(m + n, s).scale(m - n);
      if (!(lhs == rhs)) brackets = false;
      ++pairs;
    }
  std::ostringstream os;
  os << "operators 0..3 annihilate the weight-" << cap << " partition function"
     << (annihilated ? "" : " FAILS") << "; commutator relation "
     << (brackets ? "holds" : "FAILS") << " for " << pairs
     << " pairs on a random series";
  return {annihilated && brackets, os.str()};
}

// 4. Genus-zero free energy: three-way closed-form agreement plus spot values.
Outcome crit_f0(Context& cx) {
  auto t0 = clk::now();
  TruncationPolicy p;
  p.genus_max = 2;
  p.t_count_max = cx.quick ? 3 : 4;
  p.t_index_max = cx.quick ? 2 : 3;
  p.x_degree_max = cx.quick ? 5 : 8;
  p.aux_order = 0;
  GbgwEngine engine(p.t_count_max * (2 * p.t_index_max + 1));
  VerificationReport r = verify_f0(p, engine);
  bool spots = engine.correlator_c(0, {0}) == rat(1, 4) &&
               engine.correlator_c(0, {1}) == rat(1, 96) &&
               engine.correlator_c(0, {2}) == rat(1, 1920);
  std::ostringstream os;
  os << "three-way agreement, " << summarize(r) << " in "
     << fmt_secs(seconds_since(t0)) << "; spot values 1/4, 1/96, 1/1920 "
     << (spots ? "confirmed" : "WRONG");
  return {r.pass() && spots, os.str()};
}

// 5. Genus-one free energy: both jet forms plus the first spot value.
Outcome crit_f1(Context&) {
  TruncationPolicy p;
  p.genus_max = 2;
  p.t_count_max = 3;
  p.t_index_max = 2;
  p.x_degree_max = 5;
  p.aux_order = 0;
  GbgwEngine engine(15);
  VerificationReport r = verify_f1(p, engine);
  bool spot = engine.correlator_c(1, {0}) == rat(1, 8);
  std::ostringstream os;
  os << "both jet forms, " << summarize(r) << "; spot value 1/8 "
     << (spot ? "confirmed" : "WRONG");
  return {r.pass() && spot, os.str()};
}

// 6. Genus-two loop-equation solutions evaluated on both sides.
Outcome crit_loops(Context& cx) {
  VerificationReport r = verify_loop_wk(6, cx.wk);
  TruncationPolicy p;
  p.genus_max = 2;
  p.t_count_max = 2;
  p.t_index_max = 2;
  p.x_degree_max = 5;
  p.aux_order = 0;
  GbgwEngine engine(10);
  VerificationReport r2 = verify_loop_gbgw(p, engine);
  std::ostringstream os;
  os << "psi side " << summarize(r) << "; exponential side " << summarize(r2);
  return {r.pass() && r2.pass(), os.str()};
}

// 7. The correlator integral formula plus the genus-two vacuum value.
Outcome crit_elsv(Context& cx) {
  auto t0 = clk::now();
  GbgwEngine engine(9);
  VerificationReport r = verify_elsv(2, 3, 3, engine, cx.hodge);
  VerificationReport rc = elsv_constant(2, cx.hodge);
  bool target = elsv_constant_target(2) == rat(1, 1920);
  std::ostringstream os;
  os << summarize(r) << " in " << fmt_secs(seconds_since(t0))
     << "; genus-two vacuum value 1/1920 "
     << (rc.pass() && target ? "confirmed" : "WRONG");
  return {r.pass() && rc.pass() && target, os.str()};
}

// 8. The vacuum kappa-class integral against its Bernoulli closed form.
Outcome crit_kappa(Context& cx) {
  VerificationReport r = kw_bernoulli_check(2, cx.wk);
  std::ostringstream os;
  os << summarize(r) << "; genus-two value -1/240";
  return {r.pass(), os.str()};
}

// 9. KdV flows on both sides plus the initial data of the tau function.
Outcome crit_kdv(Context& cx) {
  auto t0 = clk::now();
  VerificationReport r = verify_kdv_flow_wk(0, 3, 4, 6, cx.wk);
  r.merge(verify_kdv_flow_wk(1, 3, 4, 6, cx.wk));
  GbgwEngine engine(8);
  VerificationReport r2 = verify_kdv_flow_gbgw(0, engine);
  r2.merge(verify_kdv_flow_gbgw(1, engine));
  VerificationReport r3 = verify_tau_initial(engine);
  std::ostringstream os;
  os << "psi side " << summarize(r) << "; exponential side " << summarize(r2)
     << "; initial data " << summarize(r3) << " in "
     << fmt_secs(seconds_since(t0));
  return {r.pass() && r2.pass() && r3.pass(), os.str()};
}

// 10. The wave-function ratio has no corrections through order 8.
Outcome crit_phi(Context&) {
  Series res = phi_ratio_residual(8);
  std::ostringstream os;
  os << "ratio residual "
     << (res.is_zero() ? "vanishes" : "has surviving terms")
     << " through spectral order 8";
  return {res.is_zero(), os.str()};
}

// 11. Randomized structural suites, fixed seeds, 100+ cases each.
Outcome crit_properties(Context& cx) {
  bool ok = true;
  auto axiom_ring = [] {
    TruncationPolicy p;
    p.genus_max = 2;
    p.t_count_max = 2;
    p.t_index_max = 1;
    p.x_degree_max = 3;
    p.aux_order = 2;
    p.tsmall_sum_max = 4;
    p.tsmall_index_max = 2;
    VarSet v;
    v.x = v.hbar2 = v.tsmall = true;
    return ring_new(p, v);
  };
  int axioms = 0;
  {
    auto r = axiom_ring();
    std::mt19937 rng(640912);
    for (int iter = 0; iter < 110; ++iter) {
      Series a = random_series(r, rng, 6);
      Series b = random_series(r, rng, 6);
      Series c = random_series(r, rng, 4);
      bool good = a.add(b) == b.add(a) && a.mul(b) == b.mul(a) &&
                  a.mul(b.add(c)) == a.mul(b).add(a.mul(c)) &&
                  a.mul(b).mul(c) == a.mul(b.mul(c)) &&
                  a.mul(Series::one(r)) == a && a.sub(a).is_zero();
      if (!good) ok = false;
      ++axioms;
    }
  }
  int coherence = 0;
  {
    auto rb = axiom_ring();
    TruncationPolicy ps = rb->policy();
    ps.t_count_max = 1;
    ps.x_degree_max = 2;
    ps.tsmall_sum_max = 3;
    auto rs = ring_new(ps, rb->active());
    std::mt19937 rng(771533);
    for (int iter = 0; iter < 110; ++iter) {
      Series a = random_series(rb, rng, 10);
      Series b = random_series(rb, rng, 10);
      if (!(a.mul(b).restrict_to(rs) ==
            a.restrict_to(rs).mul(b.restrict_to(rs))))
        ok = false;
      ++coherence;
    }
  }
  int selection = 0;
  {
    std::mt19937 rng(412099);
    while (selection < 60) {
      int g = static_cast<int>(rng() % 5);
      int n = 1 + static_cast<int>(rng() % 5);
      Partition I(n);
      long sum = 0;
      for (int& a : I) {
        a = static_cast<int>(rng() % 10);
        sum += a;
      }
      if (sum == 3L * g - 3 + n) continue;
      if (cx.wk.correlator(g, I) != 0) ok = false;
      ++selection;
    }
    int moved = 0;
    while (moved < 60) {
      int g = static_cast<int>(rng() % 4);
      int n = g == 0 ? 3 + static_cast<int>(rng() % 3)
                     : 1 + static_cast<int>(rng() % 4);
      int target = 3 * g - 2 + n;
      Partition I(n, 0);
      for (int u = 0; u < target; ++u) ++I[rng() % n];
      Partition with0 = I;
      with0.push_back(0);
      Rational lhs = cx.wk.correlator(g, with0);
      Rational rhs = 0;
      for (int j = 0; j < n; ++j) {
        if (I[j] == 0) continue;
        Partition K = I;
        --K[j];
        rhs += cx.wk.correlator(g, K);
      }
      if (lhs != rhs) ok = false;
      int dt = 3 * g - 3 + n;
      Partition D(n, 0);
      for (int u = 0; u < dt; ++u) ++D[rng() % n];
      Partition with1 = D;
      with1.push_back(1);
      if (cx.wk.correlator(g, with1) !=
          cx.wk.correlator(g, D) * (2 * g - 2 + n))
        ok = false;
      ++moved;
    }
    selection += moved;
  }
  int grading = 0;
  {
    auto ring = gbgw_working_ring(9);
    std::mt19937 rng(230871);
    for (int iter = 0; iter < 110; ++iter) {
      int w = static_cast<int>(rng() % 9);
      Series s = Series::zero(ring);
      int nt = 1 + static_cast<int>(rng() % 3);
      for (int t = 0; t < nt; ++t) {
        Monomial m(ring->slots(), 0);
        int rem = w;
        while (rem > 0) {
          int maxa = std::min(4, (rem - 1) / 2);
          int a = maxa == 0 ? 0 : static_cast<int>(rng() % (maxa + 1));
          ++m[ring->todd_begin() + a];
          rem -= 2 * a + 1;
        }
        m[ring->nu_slot()] = static_cast<std::int16_t>(rng() % 3);
        m[ring->hbar_slot()] = static_cast<std::int16_t>(rng() % 2);
        int c = static_cast<int>(rng() % 17) - 8;
        if (c == 0) c = 3;
        s = s.add(Series::term(ring, m, rat(c, 1 + static_cast<int>(rng() % 5))));
      }
      Series img = gbgw_cut_and_join_apply(s);
      for (const auto& [mm, cc] : img.terms()) {
        if (todd_weight(ring, mm) != w + 1) ok = false;
        (void)cc;
      }
      ++grading;
    }
  }
  int jets = 0;
  {
    std::mt19937 rng(998811);
    auto jet_weight = [](const std::vector<int>& e) {
      int w = 0;
      for (std::size_t s = 1; s < e.size(); ++s)
        w += static_cast<int>(s) * e[s];
      return w;
    };
    auto homogeneous = [&](const JetPoly& p, int weight) {
      for (const auto& [e, c] : p.terms()) {
        if (jet_weight(e) != weight) return false;
        (void)c;
      }
      return true;
    };
    auto rnd_monomial = [&] {
      std::vector<int> e(5, 0);
      e[0] = static_cast<int>(rng() % 3);
      e[1] = static_cast<int>(rng() % 7) - 3;
      for (int s = 2; s < 5; ++s) e[s] = static_cast<int>(rng() % 3);
      return JetPoly::monomial(e, rat(static_cast<int>(rng() % 19) - 9,
                                      static_cast<long>(1 + rng() % 7)));
    };
    for (int it = 0; it < 110; ++it) {
      bool expo = (it % 2) == 1;
      JetPoly a = rnd_monomial();
      JetPoly b = rnd_monomial();
      if (a.is_zero() || b.is_zero()) continue;
      int wa = jet_weight(a.terms().begin()->first);
      int wb = jet_weight(b.terms().begin()->first);
      if (!homogeneous(a.mul(b), wa + wb)) ok = false;
      if (!homogeneous(jet_d1(a, expo), wa + 1)) ok = false;
      JetPoly f = a.add(JetPoly::constant(2));
      JetPoly g = b.add(rnd_monomial());
      JetPoly lhs = jet_d1(f.mul(g), expo);
      JetPoly rhs = jet_d1(f, expo).mul(g).add(f.mul(jet_d1(g, expo)));
      if (!(lhs == rhs)) ok = false;
      ++jets;
    }
  }
  std::ostringstream os;
  os << "ring axioms " << axioms << ", restriction coherence " << coherence
     << ", selection and moving rules " << selection
     << ", cut-and-join grading " << grading << ", jet grading " << jets
     << " cases, fixed seeds";
  return {ok && axioms >= 100 && coherence >= 100 && selection >= 100 &&
              grading >= 100 && jets >= 100,
          os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) {
      quick = true;
    } else if (std::strcmp(argv[i], "--help") == 0) {
      std::printf("usage: acceptance [--quick]\n");
      return 0;
    } else {
      std::fprintf(stderr, "unknown flag: %s\n", argv[i]);
      return 2;
    }
  }
  Context cx;
  cx.quick = quick;
  struct Item {
    int id;
    const char* what;
    Outcome (*run)(Context&);
  };
  const Item items[] = {
      {1, "free-energy identity", crit_main},
      {2, "constant-term closed forms", crit_constant},
      {3, "Virasoro constraints", crit_virasoro},
      {4, "genus-zero closed forms", crit_f0},
      {5, "genus-one closed forms", crit_f1},
      {6, "loop-equation solutions", crit_loops},
      {7, "correlator integral formula", crit_elsv},
      {8, "vacuum kappa integral", crit_kappa},
      {9, "KdV flows and initial data", crit_kdv},
      {10, "wave-function ratio", crit_phi},
      {11, "randomized property suites", crit_properties},
  };
  int failed = 0;
  for (const auto& it : items) {
    Outcome out;
    try {
      out = it.run(cx);
    } catch (const std::exception& e) {
      out.ok = false;
      out.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %2d: %s  %s: %s\n", it.id, out.ok ? "PASS" : "FAIL",
                it.what, out.detail.c_str());
    std::fflush(stdout);
    if (!out.ok) ++failed;
  }
  std::printf("acceptance: %d of 11 criteria passed%s\n", 11 - failed,
              quick ? " (quick boxes)" : "");
  return failed;
}
