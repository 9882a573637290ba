#include <sstream>

#include "doctest.h"
#include "optheap/harness.hpp"

namespace h = optheap::harness;

TEST_CASE("trace round trip") {
  h::FuzzParams p;
  p.ops = 500;
  p.seed = 5;
  p.queues = 2;
  auto ops = h::generate_trace(p);
  std::ostringstream os;
  h::write_trace(os, ops);
  std::istringstream is(os.str());
  h::ParsedTrace back = h::parse_trace(is);
  REQUIRE(back.ok);
  REQUIRE(back.ops.size() == ops.size());
  std::ostringstream os2;
  h::write_trace(os2, back.ops);
  CHECK(os.str() == os2.str());
}

TEST_CASE("parse errors carry line numbers") {
  std::istringstream is("new 0\ninsert 0 5\nfrobnicate 3\n");
  h::ParsedTrace p = h::parse_trace(is);
  CHECK_FALSE(p.ok);
  CHECK(p.error_line == 3);

  std::istringstream is2("new 0\ninsert 0\n");
  h::ParsedTrace p2 = h::parse_trace(is2);
  CHECK_FALSE(p2.ok);
  CHECK(p2.error_line == 2);
}

TEST_CASE("small fuzz passes against the oracle") {
  h::FuzzParams p;
  p.ops = 10000;
  p.seed = 1;
  p.queues = 3;
  auto ops = h::generate_trace(p);
  h::RunOptions ro;
  ro.validate_every = 64;
  h::RunResult r = h::run_trace(ops, ro);
  CAPTURE(r.error);
  CHECK(r.ok);
}

TEST_CASE("fuzz traces replay to the same verdict deterministically") {
  h::FuzzParams p;
  p.ops = 3000;
  p.seed = 23;
  p.queues = 4;
  auto ops = h::generate_trace(p);
  h::RunOptions ro;
  h::RunResult a = h::run_trace(ops, ro);
  h::RunResult b = h::run_trace(ops, ro);
  CHECK(a.ok == b.ok);
  CHECK(a.executed == b.executed);
  CHECK(a.max_deletemin_comparisons == b.max_deletemin_comparisons);
}

TEST_CASE("workload generation is deterministic in (name, n, seed)") {
  h::Workload w;
  w.name = "dijkstra-like";
  w.n = 200;
  w.seed = 12;
  auto a = h::generate_workload(w);
  auto b = h::generate_workload(w);
  REQUIRE(a.size() == b.size());
  std::ostringstream sa, sb;
  h::write_trace(sa, a);
  h::write_trace(sb, b);
  CHECK(sa.str() == sb.str());
  CHECK(!a.empty());
}

TEST_CASE("all named workloads execute cleanly") {
  for (const char* name : {"drain", "sorted", "reverse", "random", "dijkstra-like",
                           "meld-heavy", "decrease-heavy"}) {
    h::Workload w;
    w.name = name;
    w.n = 300;
    w.seed = 7;
    auto ops = h::generate_workload(w);
    REQUIRE(!ops.empty());
    h::RunOptions ro;
    ro.validate_every = 128;
    h::MeasureTable table;
    ro.measure = &table;
    h::RunResult r = h::run_trace(ops, ro);
    CAPTURE(name);
    CAPTURE(r.error);
    CHECK(r.ok);
    if (r.ok) CHECK(!table.rows().empty());
  }
}

TEST_CASE("measurement emits json and csv rows") {
  h::Workload w;
  w.name = "drain";
  w.n = 128;
  w.seed = 3;
  auto ops = h::generate_workload(w);
  h::MeasureTable table;
  h::RunOptions ro;
  ro.measure = &table;
  h::RunResult r = h::run_trace(ops, ro);
  REQUIRE(r.ok);
  std::ostringstream js, cs;
  table.to_json(js, optheap::QueueConfig{});
  table.to_csv(cs);
  CHECK(js.str().find("max_comparisons") != std::string::npos);
  CHECK(cs.str().find("op,n_bucket") != std::string::npos);
  CHECK(table.max_comparisons("deletemin") > 0);
}

TEST_CASE("dump format is parenthesized element:rank text") {
  h::INode a(5), b(9);
  optheap::OpCounters st;
  optheap::attach_sole(&a, &b, st);
  a.rank = 1;
  CHECK(h::dump_tree(&a) == "(5:1 (9:0))");
}

TEST_CASE("instrumentation does not perturb behavior") {
  h::FuzzParams p;
  p.ops = 4000;
  p.seed = 77;
  p.queues = 3;
  auto ops = h::generate_trace(p);
  h::RunOptions plain;
  h::RunResult a = h::run_trace(ops, plain);
  h::MeasureTable table;
  h::RunOptions measured;
  measured.measure = &table;
  h::RunResult b = h::run_trace(ops, measured);
  CHECK(a.ok == b.ok);
  CHECK(a.executed == b.executed);
  CHECK(a.max_deletemin_comparisons == b.max_deletemin_comparisons);
}
