#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "optheap/counter.hpp"
#include "optheap/harness.hpp"

namespace h = optheap::harness;
using optheap::QueueConfig;

namespace {

QueueConfig config_from_env() {
  QueueConfig cfg;
  if (const char* e = std::getenv("OPTHEAP_EPSILON_RATE")) {
    int v = std::atoi(e);
    if (v > 0) cfg.extension_rate = v;
  }
  return cfg;
}

int cmd_fuzz(long ops, std::uint64_t seed, int queues, bool paranoid, int validate_every,
             const std::string& out) {
  h::FuzzParams p;
  p.ops = ops;
  p.seed = seed;
  p.queues = queues;
  std::vector<h::TraceOp> trace = h::generate_trace(p);
  h::RunOptions ro;
  ro.config = config_from_env();
  ro.validate_every = paranoid ? 1 : validate_every;
  h::RunResult r = h::run_trace(trace, ro);
  if (r.ok) {
    std::cout << "fuzz: pass (" << r.executed << " ops, peak aux/live "
              << r.peak_space_ratio << ")\n";
    return 0;
  }
  std::cout << "fuzz: FAIL: " << r.error << '\n';
  if (!out.empty()) {
    std::ofstream f(out);
    h::write_trace(f, trace);
    std::cout << "failing trace written to " << out << '\n';
  }
  return 1;
}

int cmd_replay(const std::string& file, bool paranoid, int dump_every) {
  std::ifstream f(file);
  if (!f) {
    std::cerr << "replay: cannot open " << file << '\n';
    return 2;
  }
  h::ParsedTrace pt = h::parse_trace(f);
  if (!pt.ok) {
    std::cerr << "replay: parse error at line " << pt.error_line << ": " << pt.error << '\n';
    return 2;
  }
  h::RunOptions ro;
  ro.config = config_from_env();
  ro.validate_every = paranoid ? 1 : 0;
  ro.dump_to = dump_every > 0 ? &std::cout : nullptr;
  ro.dump_every = dump_every;
  h::RunResult r = h::run_trace(pt.ops, ro);
  if (r.ok) {
    std::cout << "replay: pass (" << r.executed << " ops)\n";
    return 0;
  }
  std::cout << "replay: FAIL: " << r.error << '\n';
  return 1;
}

int cmd_dump(const std::string& file) {
  std::ifstream f(file);
  if (!f) {
    std::cerr << "dump: cannot open " << file << '\n';
    return 2;
  }
  h::ParsedTrace pt = h::parse_trace(f);
  if (!pt.ok) {
    std::cerr << "dump: parse error at line " << pt.error_line << ": " << pt.error << '\n';
    return 2;
  }
  h::RunOptions ro;
  ro.config = config_from_env();
  ro.dump_to = &std::cout;
  ro.dump_every = pt.ops.empty() ? 1 : int(pt.ops.size());
  h::RunResult r = h::run_trace(pt.ops, ro);
  if (!r.ok) {
    std::cout << "dump: FAIL: " << r.error << '\n';
    return 1;
  }
  return 0;
}

int cmd_bench(const std::string& workload, std::vector<long> sizes, std::uint64_t seed,
              const std::string& format, bool assert_bounds, double slack,
              const std::string& out) {
  QueueConfig cfg = config_from_env();
  if (sizes.empty()) sizes = {1 << 16};
  bool failed = false;
  // Constancy tracking across sizes for the constant-time operations.
  std::uint64_t max_cmp[3] = {0, 0, 0};
  std::uint64_t max_edit[3] = {0, 0, 0};
  const char* cops[3] = {"insert", "decrease", "meld"};
  bool first_size = true;

  std::ostringstream buf;
  for (long n : sizes) {
    h::Workload w;
    w.name = workload;
    w.n = n;
    w.seed = seed;
    std::vector<h::TraceOp> trace = h::generate_workload(w);
    if (trace.empty()) {
      std::cerr << "bench: unknown workload '" << workload << "'\n";
      return 2;
    }
    h::MeasureTable table;
    h::RunOptions ro;
    ro.config = cfg;
    ro.measure = &table;
    ro.check_oracle = true;
    h::RunResult r = h::run_trace(trace, ro);
    if (!r.ok) {
      std::cout << "bench: FAIL: " << r.error << '\n';
      return 1;
    }
    if (format == "json")
      table.to_json(buf, cfg);
    else
      table.to_csv(buf);

    if (assert_bounds) {
      double eps = 2.0 / cfg.extension_rate;
      double lg = std::log2(double(n));
      double bound = (69.12 + 21.0 * eps) * lg + slack;
      std::uint64_t dm = table.max_comparisons("deletemin");
      if (double(dm) > bound) {
        std::cout << "bench: delete-min bound exceeded: max " << dm << " > " << bound
                  << " at n=" << n << '\n';
        failed = true;
      }
      for (int i = 0; i < 3; ++i) {
        std::uint64_t c = table.max_comparisons(cops[i]);
        std::uint64_t e = table.max_edits(cops[i]);
        if (first_size) {
          max_cmp[i] = c;
          max_edit[i] = e;
        } else if (c > max_cmp[i] || e > max_edit[i]) {
          std::cout << "bench: " << cops[i] << " cost grew with n (" << c << " cmp, " << e
                    << " edits at n=" << n << ")\n";
          failed = true;
        }
      }
      first_size = false;
    }
  }
  if (!out.empty()) {
    std::ofstream f(out);
    f << buf.str();
  } else {
    std::cout << buf.str();
  }
  std::cout << "# epsilon_rate=" << cfg.extension_rate
            << " transfer_steps=" << cfg.transfer_steps << '\n';
  return failed ? 1 : 0;
}

// Pure-counter script: one command per line:
//   inc <i> | dec <i> | assert-regular | assert-value <v>
int cmd_counter(const std::string& file) {
  std::ifstream f(file);
  if (!f) {
    std::cerr << "counter: cannot open " << file << '\n';
    return 2;
  }
  optheap::PureCounter c;
  optheap::PureCallbacks cb;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    if (word == "inc") {
      std::size_t i;
      if (!(ss >> i) || i > c.length()) {
        std::cerr << "counter: bad inc at line " << lineno << '\n';
        return 2;
      }
      c.increment(i, optheap::PureTree{}, cb);
    } else if (word == "dec") {
      std::size_t i;
      if (!(ss >> i) || c.length() == 0 || i > c.length() - 1) {
        std::cerr << "counter: bad dec at line " << lineno << '\n';
        return 2;
      }
      optheap::DeferredTrees<optheap::PureTree> d;
      c.decrement(i, cb, d);
    } else if (word == "assert-regular") {
      if (!c.is_regular()) {
        std::cout << "counter: assert-regular failed at line " << lineno << '\n';
        return 1;
      }
    } else if (word == "assert-value") {
      std::uint64_t v;
      if (!(ss >> v)) {
        std::cerr << "counter: bad assert-value at line " << lineno << '\n';
        return 2;
      }
      if (c.value() != v) {
        std::cout << "counter: assert-value failed at line " << lineno << ": have "
                  << c.value() << ", want " << v << '\n';
        return 1;
      }
    } else {
      std::cerr << "counter: unknown command '" << word << "' at line " << lineno << '\n';
      return 2;
    }
  }
  std::cout << "digits:";
  for (int d : c.digits()) std::cout << ' ' << d;
  std::cout << "\nvalue: " << c.value() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"worst-case constant-time meldable priority queue toolkit"};
  app.require_subcommand(1);

  auto* fz = app.add_subcommand("fuzz", "run a randomized differential fuzz campaign");
  long ops = 100000;
  std::uint64_t seed = 1;
  int queues = 4;
  bool paranoid = false;
  int validate_every = 64;
  std::string out;
  fz->add_option("--ops", ops, "operations to generate");
  fz->add_option("--seed", seed, "rng seed");
  fz->add_option("--queues", queues, "concurrent queues");
  fz->add_flag("--paranoid", paranoid, "validate structure after every op");
  fz->add_option("--validate-every", validate_every, "validator period in ops");
  fz->add_option("--out", out, "write failing trace here");

  auto* rp = app.add_subcommand("replay", "execute a trace file with oracle checks");
  std::string replay_file;
  bool rp_paranoid = false;
  int dump_every = 0;
  rp->add_option("file", replay_file, "trace file")->required();
  rp->add_flag("--paranoid", rp_paranoid, "validate structure after every op");
  rp->add_option("--dump-every", dump_every, "print tree dumps every N ops");

  auto* dp = app.add_subcommand("dump", "execute a trace and print final tree dumps");
  std::string dump_file;
  dp->add_option("file", dump_file, "trace file")->required();

  auto* bn = app.add_subcommand("bench", "measure comparison counts over a workload");
  std::string workload = "drain";
  std::vector<long> sizes;
  std::uint64_t bseed = 1;
  std::string format = "csv";
  bool assert_bounds = false;
  double slack = 64.0;
  std::string bout;
  bn->add_option("--workload", workload,
                 "drain|sorted|reverse|random|dijkstra-like|meld-heavy|decrease-heavy");
  bn->add_option("--n", sizes, "element count (repeatable)");
  bn->add_option("--seed", bseed, "rng seed");
  bn->add_option("--format", format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  bn->add_flag("--assert-bounds", assert_bounds, "fail on bound violations");
  bn->add_option("--slack", slack, "additive slack C for the delete-min bound");
  bn->add_option("--out", bout, "write the report here");

  auto* cn = app.add_subcommand("counter", "run a pure counter script");
  std::string counter_file;
  cn->add_option("file", counter_file, "counter script")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (fz->parsed()) return cmd_fuzz(ops, seed, queues, paranoid, validate_every, out);
    if (rp->parsed()) return cmd_replay(replay_file, rp_paranoid, dump_every);
    if (dp->parsed()) return cmd_dump(dump_file);
    if (bn->parsed())
      return cmd_bench(workload, sizes, bseed, format, assert_bounds, slack, bout);
    if (cn->parsed()) return cmd_counter(counter_file);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
