// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Run via ctest or directly.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <deque>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "optheap/counter.hpp"
#include "optheap/harness.hpp"
#include "optheap/rarray.hpp"

namespace h = optheap::harness;
using optheap::DeferredTrees;
using optheap::OpCounters;
using optheap::PureCallbacks;
using optheap::PureCounter;
using optheap::PureTree;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
  std::cout << "CRITERION " << criterion << ' ' << (pass ? "PASS" : "FAIL") << " — "
            << what;
  if (!detail.empty()) std::cout << " (" << detail << ')';
  std::cout << '\n';
  if (!pass) ++failures;
}

// Frozen regression constants, measured on this implementation.
constexpr std::uint64_t kDeleteMinRegressionCeiling = 700;  // n = 2^20 drain
constexpr double kSpaceLinearityC = 64.0;                   // aux units per element
constexpr double kDeleteMinSlackC = 64.0;                   // additive slack in the bound

// ---- criteria 1 & 2: counter campaigns ----

struct CounterState {
  std::vector<int> d;
  std::vector<std::uint32_t> f;
  std::string key() const {
    std::string s;
    for (std::size_t i = 0; i < d.size(); ++i) {
      s += char('0' + d[i]);
      s += ':';
      s += std::to_string(f[i]);
      s += ',';
    }
    return s;
  }
};

bool counter_criteria() {
  Timer t;
  bool ok = true;
  std::string why;

  auto apply = [&](const CounterState& s, bool is_inc, std::size_t i,
                   CounterState* out) -> bool {
    PureCounter c = PureCounter::from_digits(s.d, s.f);
    OpCounters st;
    c.set_stats(&st);
    PureCallbacks cb;
    std::uint64_t v0 = c.value();
    std::size_t l0 = c.length();
    if (is_inc) {
      c.increment(i, PureTree{}, cb);
    } else {
      DeferredTrees<PureTree> dt;
      c.decrement(i, cb, dt);
      if (dt.count != 0) return false;
    }
    if (!c.is_regular()) return false;
    std::uint64_t want = is_inc ? v0 + (std::uint64_t(1) << i) : v0 - (std::uint64_t(1) << i);
    if (c.value() != want) return false;
    if (is_inc && c.length() > l0 + 1) return false;
    if (!is_inc && c.length() + 2 < l0) return false;
    if (st.fixes > 2 || st.digit_writes > 5) return false;
    out->d = c.digits();
    out->f.clear();
    for (std::size_t k = 0; k < c.length(); ++k)
      out->f.push_back(std::uint32_t(c.forward(k)));
    return true;
  };

  // exhaustive: every transition of every op sequence of length <= 10 at
  // positions <= 4, deduplicated by full (digits, forwards) state
  {
    std::deque<std::pair<CounterState, int>> work;
    std::set<std::string> seen;
    work.push_back({CounterState{}, 0});
    seen.insert(CounterState{}.key());
    long transitions = 0;
    while (!work.empty() && ok) {
      auto [s, depth] = work.front();
      work.pop_front();
      if (depth == 10) continue;
      std::size_t len = s.d.size();
      for (std::size_t i = 0; i <= len && i <= 4 && ok; ++i) {
        CounterState n;
        if (!apply(s, true, i, &n)) {
          ok = false;
          why = "exhaustive increment failed at state " + s.key();
          break;
        }
        ++transitions;
        if (seen.insert(n.key()).second) work.push_back({n, depth + 1});
      }
      for (std::size_t i = 0; i < len && i <= 4 && ok; ++i) {
        CounterState n;
        if (!apply(s, false, i, &n)) {
          ok = false;
          why = "exhaustive decrement failed at state " + s.key();
          break;
        }
        ++transitions;
        if (seen.insert(n.key()).second) work.push_back({n, depth + 1});
      }
    }
    if (ok && transitions < 1000) {
      ok = false;
      why = "exhaustive walk too small";
    }
  }

  // randomized: 1e5 ops
  if (ok) {
    std::mt19937_64 rng(99);
    PureCounter c;
    OpCounters st;
    c.set_stats(&st);
    PureCallbacks cb;
    std::uint64_t value = 0;
    for (long step = 0; step < 100000 && ok; ++step) {
      std::uint64_t f0 = st.fixes, w0 = st.digit_writes;
      bool do_inc = value == 0 || (rng() % 100) < 55;
      if (do_inc) {
        std::size_t i = rng() % (std::min<std::size_t>(c.length(), 14) + 1);
        c.increment(i, PureTree{}, cb);
        value += std::uint64_t(1) << i;
      } else {
        std::size_t i = rng() % c.length();
        DeferredTrees<PureTree> dt;
        c.decrement(i, cb, dt);
        value -= std::uint64_t(1) << i;
      }
      if (c.value() != value || st.fixes - f0 > 2 || st.digit_writes - w0 > 5) {
        ok = false;
        why = "randomized walk violated a budget at step " + std::to_string(step);
      }
      if (step % 64 == 0 && !c.is_regular()) {
        ok = false;
        why = "randomized walk lost regularity";
      }
    }
    if (ok && !c.is_regular()) {
      ok = false;
      why = "final state not regular";
    }
  }

  double secs = t.seconds();
  report(1, ok && secs < 10.0, "counter regularity and value bookkeeping",
         ok ? ("exhaustive + 1e5 random ops in " + std::to_string(secs) + " s")
            : why);
  return ok;
}

// criterion 2's attached-mode comparison budgets ride on a queue fuzz
bool fix_budget_attached() {
  h::FuzzParams p;
  p.ops = 200000;
  p.seed = 41;
  p.queues = 4;
  auto ops = h::generate_trace(p);
  h::RunOptions ro;
  ro.validate_every = 0;
  // run manually to reach the queue counters: reuse run_trace then inspect
  // via a dedicated measurement pass
  h::RunResult r = h::run_trace(ops, ro);
  if (!r.ok) {
    report(2, false, "fix budget", r.error);
    return false;
  }
  // re-run while tracking per-counter-op comparison maxima
  // (collected inside the queue itself)
  bool ok = r.max_increment_cmp <= 2 && r.max_decrement_cmp <= 6;
  report(2, ok, "fix and comparison budgets per counter op",
         "max inc cmp " + std::to_string(r.max_increment_cmp) + ", max dec cmp " +
             std::to_string(r.max_decrement_cmp));
  return ok;
}

bool oracle_equivalence() {
  Timer t;
  h::FuzzParams p;
  p.ops = 1000000;
  p.seed = 7;
  p.queues = 4;
  auto ops = h::generate_trace(p);
  h::RunOptions ro;
  ro.validate_every = 4096;
  h::RunResult r = h::run_trace(ops, ro);
  bool ok = r.ok;
  std::string detail = r.ok ? "" : r.error;

  if (ok) {  // full drain of 2^18 random inserts comes out sorted
    h::Workload w;
    w.name = "drain";
    w.n = 1 << 18;
    w.seed = 5;
    auto trace = h::generate_workload(w);
    h::RunOptions ro2;
    h::RunResult r2 = h::run_trace(trace, ro2);
    ok = r2.ok;
    if (!ok) detail = r2.error;
  }
  double secs = t.seconds();
  report(3, ok && secs < 120.0, "oracle equivalence over 1e6 ops + 2^18 drain",
         ok ? (std::to_string(secs) + " s") : detail);
  return ok;
}

bool paranoid_invariants() {
  Timer t;
  h::FuzzParams p;
  p.ops = 100000;
  p.seed = 3;
  p.queues = 3;
  p.w_insert = 5;
  p.w_deletemin = 4;  // keep sizes moderate so full scans stay affordable
  auto ops = h::generate_trace(p);
  h::RunOptions ro;
  ro.validate_every = 1;
  h::RunResult r = h::run_trace(ops, ro);
  report(4, r.ok, "structural invariants under paranoid fuzz",
         r.ok ? (std::to_string(t.seconds()) + " s") : r.error);
  return r.ok;
}

bool worst_case_constancy() {
  bool ok = true;
  std::string detail;
  for (const char* workload : {"decrease-heavy", "meld-heavy"}) {
    std::uint64_t cmp[3] = {0, 0, 0};
    std::uint64_t edt[3] = {0, 0, 0};
    const char* ops3[3] = {"insert", "decrease", "meld"};
    bool first = true;
    for (long n : {1L << 10, 1L << 12, 1L << 14, 1L << 16, 1L << 18, 1L << 20}) {
      h::Workload w;
      w.name = workload;
      w.n = n;
      w.seed = 21;
      auto trace = h::generate_workload(w);
      h::MeasureTable table;
      h::RunOptions ro;
      ro.measure = &table;
      ro.check_oracle = false;  // keep the 2^20 runs fast
      h::RunResult r = h::run_trace(trace, ro);
      if (!r.ok) {
        ok = false;
        detail = r.error;
        break;
      }
      for (int i = 0; i < 3; ++i) {
        std::uint64_t c = table.max_comparisons(ops3[i]);
        std::uint64_t e = table.max_edits(ops3[i]);
        if (std::string(workload) == "decrease-heavy" && std::string(ops3[i]) == "meld")
          continue;  // no melds in that workload
        if (first) {
          cmp[i] = c;
          edt[i] = e;
        } else if (c != cmp[i] || e != edt[i]) {
          ok = false;
          detail = std::string(workload) + "/" + ops3[i] + " changed with n: " +
                   std::to_string(cmp[i]) + "->" + std::to_string(c) + " cmp, " +
                   std::to_string(edt[i]) + "->" + std::to_string(e) + " edits at n=" +
                   std::to_string(n);
        }
      }
      if (!ok) break;
      first = false;
    }
    if (!ok) break;
    if (detail.empty())
      detail = std::string(workload) + " stable";
  }
  report(5, ok, "constant-time ops have size-independent worst cases", detail);
  return ok;
}

bool deletemin_bound() {
  Timer t;
  h::Workload w;
  w.name = "drain";
  w.n = 1 << 20;
  w.seed = 2;
  auto trace = h::generate_workload(w);
  h::RunOptions ro;
  ro.check_oracle = false;
  h::RunResult r = h::run_trace(trace, ro);
  if (!r.ok) {
    report(6, false, "delete-min comparison bound", r.error);
    return false;
  }
  optheap::QueueConfig cfg;
  double eps = 2.0 / cfg.extension_rate;  // <= 2 new violations per op over
                                          // 4 array extensions per op
  double bound = (69.12 + 21.0 * eps) * 20.0 + kDeleteMinSlackC;
  bool in_bound = double(r.max_deletemin_comparisons) <= bound;
  bool in_regression = r.max_deletemin_comparisons <= kDeleteMinRegressionCeiling;
  report(6, in_bound && in_regression && t.seconds() < 60.0,
         "delete-min comparisons within (69.12 + 21e) lg n + C at n = 2^20",
         "max " + std::to_string(r.max_deletemin_comparisons) + ", bound " +
             std::to_string(bound) + ", regression ceiling " +
             std::to_string(kDeleteMinRegressionCeiling) + ", " +
             std::to_string(t.seconds()) + " s");
  return in_bound && in_regression;
}

bool space_linearity() {
  h::Workload w;
  w.name = "meld-heavy";
  w.n = 1 << 16;
  w.seed = 9;
  auto trace = h::generate_workload(w);
  h::RunOptions ro;
  h::RunResult r = h::run_trace(trace, ro);
  if (!r.ok) {
    report(7, false, "space linearity", r.error);
    return false;
  }
  bool ok = r.peak_space_ratio <= kSpaceLinearityC;
  report(7, ok, "auxiliary space stays linear under meld-heavy fuzz",
         "peak aux/live " + std::to_string(r.peak_space_ratio) + ", frozen c " +
             std::to_string(kSpaceLinearityC));
  return ok;
}

bool rarray_oracle() {
  std::mt19937_64 rng(1234);
  optheap::ResizableArray<long> a;
  std::vector<long> ref;
  bool ok = true;
  std::string why;
  for (long step = 0; step < 100000 && ok; ++step) {
    bool grow = ref.empty() || (rng() % 100) < 52;
    if (grow) {
      a.grow();
      long v = long(rng());
      a[a.size() - 1] = v;
      ref.push_back(v);
    } else {
      a.shrink();
      ref.pop_back();
    }
    if (a.last_call_work() > 4) {
      ok = false;
      why = "per-call work exceeded";
    }
    if (a.capacity() > 6 * ref.size() + 4) {
      ok = false;
      why = "allocation exceeded 6x live size";
    }
    if (a.size() != ref.size()) {
      ok = false;
      why = "size diverged";
    }
    if (ok && !ref.empty()) {
      std::size_t i = rng() % ref.size();
      if (a[i] != ref[i]) {
        ok = false;
        why = "content diverged";
      }
    }
    if (ok && step % 8192 == 0) {
      for (std::size_t i = 0; i < ref.size() && ok; ++i)
        if (a[i] != ref[i]) {
          ok = false;
          why = "content diverged on full sweep";
        }
    }
  }
  report(8, ok, "resizable array matches a plain dynamic array", why);
  return ok;
}

}  // namespace

int main() {
  counter_criteria();
  fix_budget_attached();
  oracle_equivalence();
  paranoid_invariants();
  worst_case_constancy();
  deletemin_bound();
  space_linearity();
  rarray_oracle();
  if (failures == 0) {
    std::cout << "ALL CRITERIA PASS\n";
    return 0;
  }
  std::cout << failures << " CRITERIA FAILED\n";
  return 1;
}
