#include <algorithm>
#include <cassert>
#include <ostream>
#include <random>
#include <unordered_set>

#include "optheap/harness.hpp"

namespace optheap::harness {


RunResult run_trace(const std::vector<TraceOp>& ops, const RunOptions& opt) {
  RunResult res;
  std::unordered_map<int, IQueue> queues;
  std::unordered_map<int, OracleQueue> oracles;
  std::deque<INode> nodes;  // stable addresses; index = insertion seq
  std::unordered_map<const INode*, long> seq_of;

  auto fail = [&](long idx, const std::string& msg) {
    res.ok = false;
    res.failed_op = idx;
    res.error = msg + " (op " + std::to_string(idx) + ": " +
                (idx >= 0 && idx < long(ops.size()) ? format_op(ops[std::size_t(idx)]) : "?") + ")";
  };

  auto live_elements = [&]() {
    std::size_t n = 0;
    for (auto& [id, q] : queues) n += q.size();
    return n;
  };
  auto space_units = [&]() {
    std::size_t u = 0;
    for (auto& [id, q] : queues) u += q.retained_space_units();
    return u;
  };

  for (long idx = 0; idx < long(ops.size()); ++idx) {
    const TraceOp& op = ops[std::size_t(idx)];
    int touched = op.q1;
    OpCounters before{};
    std::size_t n_at_op = 0;

    switch (op.kind) {
      case TraceOp::New: {
        if (queues.count(op.q1)) {
          fail(idx, "queue id already live");
          return res;
        }
        queues.emplace(op.q1, IQueue(opt.config));
        oracles.emplace(op.q1, OracleQueue{});
        break;
      }
      case TraceOp::Insert: {
        auto it = queues.find(op.q1);
        if (it == queues.end()) {
          fail(idx, "insert into unknown queue");
          return res;
        }
        n_at_op = it->second.size();
        before = it->second.counters();
        nodes.emplace_back(op.key);
        long seq = long(nodes.size()) - 1;
        seq_of[&nodes.back()] = seq;
        it->second.insert(&nodes.back());
        oracles[op.q1].insert(op.key, seq);
        if (opt.measure) {
          OpCounters d = it->second.counters();
          opt.measure->add("insert", n_at_op, d.comparisons - before.comparisons,
                           d.fixes - before.fixes,
                           d.structural_edits - before.structural_edits);
        }
        break;
      }
      case TraceOp::DeleteMin: {
        auto it = queues.find(op.q1);
        if (it == queues.end()) {
          fail(idx, "deletemin on unknown queue");
          return res;
        }
        if (it->second.empty()) {
          fail(idx, "deletemin on empty queue");
          return res;
        }
        n_at_op = it->second.size();
        before = it->second.counters();
        INode* got = it->second.delete_min();
        OpCounters d = it->second.counters();
        std::uint64_t cmp = d.comparisons - before.comparisons;
        if (cmp > res.max_deletemin_comparisons) res.max_deletemin_comparisons = cmp;
        if (opt.measure)
          opt.measure->add("deletemin", n_at_op, cmp, d.fixes - before.fixes,
                           d.structural_edits - before.structural_edits);
        OracleQueue& oq = oracles[op.q1];
        if (opt.check_oracle && got->element != oq.min()) {
          fail(idx, "deletemin returned key " + std::to_string(got->element) +
                        ", oracle expects " + std::to_string(oq.min()));
          return res;
        }
        oq.remove_min(got->element, seq_of.at(got));
        break;
      }
      case TraceOp::Decrease: {
        auto it = queues.find(op.q1);
        if (it == queues.end()) {
          fail(idx, "decrease on unknown queue");
          return res;
        }
        if (op.seq < 0 || op.seq >= long(nodes.size())) {
          fail(idx, "decrease on unknown node");
          return res;
        }
        OracleQueue& oq = oracles[op.q1];
        if (!oq.contains_seq(op.seq)) {
          fail(idx, "decrease target not in this queue");
          return res;
        }
        n_at_op = it->second.size();
        before = it->second.counters();
        it->second.decrease(&nodes[std::size_t(op.seq)], op.key);
        oq.decrease(op.seq, op.key);
        if (opt.measure) {
          OpCounters d = it->second.counters();
          opt.measure->add("decrease", n_at_op, d.comparisons - before.comparisons,
                           d.fixes - before.fixes,
                           d.structural_edits - before.structural_edits);
        }
        break;
      }
      case TraceOp::Delete: {
        auto it = queues.find(op.q1);
        if (it == queues.end()) {
          fail(idx, "delete on unknown queue");
          return res;
        }
        OracleQueue& oq = oracles[op.q1];
        if (op.seq < 0 || op.seq >= long(nodes.size()) || !oq.contains_seq(op.seq)) {
          fail(idx, "delete target not in this queue");
          return res;
        }
        n_at_op = it->second.size();
        before = it->second.counters();
        INode* x = &nodes[std::size_t(op.seq)];
        it->second.erase(x);
        oq.remove(x->element, op.seq);
        if (opt.measure) {
          OpCounters d = it->second.counters();
          opt.measure->add("delete", n_at_op, d.comparisons - before.comparisons,
                           d.fixes - before.fixes,
                           d.structural_edits - before.structural_edits);
        }
        break;
      }
      case TraceOp::Meld: {
        auto ia = queues.find(op.q1);
        auto ib = queues.find(op.q2);
        if (ia == queues.end() || ib == queues.end() || op.q1 == op.q2 ||
            queues.count(op.q3)) {
          fail(idx, "bad meld operands");
          return res;
        }
        n_at_op = ia->second.size() + ib->second.size();
        before = ia->second.counters();
        before += ib->second.counters();
        IQueue merged = IQueue::meld(std::move(ia->second), std::move(ib->second));
        queues.erase(ia);
        queues.erase(queues.find(op.q2));
        OpCounters d = merged.counters();
        queues.emplace(op.q3, std::move(merged));
        OracleQueue oa = std::move(oracles[op.q1]);
        OracleQueue ob = std::move(oracles[op.q2]);
        oracles.erase(op.q1);
        oracles.erase(op.q2);
        oa.merge(std::move(ob));
        oracles.emplace(op.q3, std::move(oa));
        if (opt.measure)
          opt.measure->add("meld", n_at_op, d.comparisons - before.comparisons,
                           d.fixes - before.fixes,
                           d.structural_edits - before.structural_edits);
        touched = op.q3;
        break;
      }
      case TraceOp::Destroy: {
        auto it = queues.find(op.q1);
        if (it == queues.end()) {
          fail(idx, "destroy on unknown queue");
          return res;
        }
        if (!it->second.empty()) {
          fail(idx, "destroy on non-empty queue");
          return res;
        }
        it->second.destroy();
        queues.erase(it);
        oracles.erase(op.q1);
        touched = -1;
        break;
      }
    }
    ++res.executed;

    if (touched >= 0) {
      auto it = queues.find(touched);
      if (it != queues.end()) {
        const OpCounters& c = it->second.counters();
        if (c.max_increment_comparisons > res.max_increment_cmp)
          res.max_increment_cmp = c.max_increment_comparisons;
        if (c.max_decrement_comparisons > res.max_decrement_cmp)
          res.max_decrement_cmp = c.max_decrement_comparisons;
      }
    }

    // find-min lockstep check on the touched queue
    if (opt.check_oracle && touched >= 0) {
      auto it = queues.find(touched);
      if (it != queues.end() && !it->second.empty()) {
        Key live_min = it->second.find_min()->element;
        Key want = oracles[touched].min();
        if (live_min != want) {
          fail(idx, "find_min " + std::to_string(live_min) + ", oracle expects " +
                        std::to_string(want));
          return res;
        }
      }
    }

    if (opt.validate_every > 0 && (idx % opt.validate_every) == 0 && touched >= 0) {
      auto it = queues.find(touched);
      if (it != queues.end()) {
        ValidationReport vr = validate_structure(it->second);
        if (!vr.healthy()) {
          fail(idx, "validator: " + vr.errors.front());
          return res;
        }
      }
    }

    std::size_t units = space_units();
    if (units > res.peak_space_units) res.peak_space_units = units;
    std::size_t live = live_elements();
    double ratio = double(units) / double(live == 0 ? 1 : live);
    if (ratio > res.peak_space_ratio) res.peak_space_ratio = ratio;

    if (opt.dump_to && opt.dump_every > 0 && (idx + 1) % opt.dump_every == 0) {
      for (auto& [id, q] : queues)
        *opt.dump_to << "# op " << idx << " q" << id << ' ' << dump_queue(q) << '\n';
    }
  }

  // final validation pass over every live queue
  if (opt.validate_every > 0) {
    for (auto& [id, q] : queues) {
      ValidationReport vr = validate_structure(q);
      if (!vr.healthy()) {
        fail(long(ops.size()) - 1, "final validator (q" + std::to_string(id) +
                                       "): " + vr.errors.front());
        return res;
      }
    }
  }
  return res;
}

// --- deterministic trace generation ---

namespace {

struct GenQueue {
  std::vector<long> live;                  // seqs, unordered
  std::unordered_map<long, std::size_t> pos;
  std::set<std::pair<Key, long>> ordered;  // for deletemin prediction
  void add(long seq, Key k) {
    pos[seq] = live.size();
    live.push_back(seq);
    ordered.emplace(k, seq);
  }
  void remove(long seq, Key k) {
    std::size_t p = pos.at(seq);
    live[p] = live.back();
    pos[live[p]] = p;
    live.pop_back();
    pos.erase(seq);
    ordered.erase({k, seq});
  }
};

struct Gen {
  std::mt19937_64 rng;
  std::vector<TraceOp> out;
  std::unordered_map<int, GenQueue> qs;
  std::unordered_map<long, Key> key_of;
  std::unordered_set<Key> used;
  int next_qid = 0;
  long next_seq = 0;

  explicit Gen(std::uint64_t seed) : rng(seed) {}

  std::uint64_t rnd(std::uint64_t n) { return rng() % n; }

  Key fresh_key() {
    for (;;) {
      Key k = Key(rng() % 0x4000000000ull) - 0x2000000000ll;
      if (used.insert(k).second) return k;
    }
  }
  Key fresh_key_below(Key old) {
    Key k = old - 1 - Key(rng() % 100000);
    while (!used.insert(k).second) --k;
    return k;
  }

  int new_queue() {
    int id = next_qid++;
    out.push_back({TraceOp::New, id});
    qs.emplace(id, GenQueue{});
    return id;
  }
  void insert(int q) {
    Key k = fresh_key();
    TraceOp op{TraceOp::Insert, q};
    op.key = k;
    out.push_back(op);
    key_of[next_seq] = k;
    qs[q].add(next_seq, k);
    ++next_seq;
  }
  void deletemin(int q) {
    GenQueue& g = qs[q];
    auto [k, seq] = *g.ordered.begin();
    out.push_back({TraceOp::DeleteMin, q});
    g.remove(seq, k);
  }
  void decrease(int q) {
    GenQueue& g = qs[q];
    long seq = g.live[rnd(g.live.size())];
    Key nk = fresh_key_below(key_of[seq]);
    g.ordered.erase({key_of[seq], seq});
    g.ordered.emplace(nk, seq);
    key_of[seq] = nk;
    TraceOp op{TraceOp::Decrease, q};
    op.seq = seq;
    op.key = nk;
    out.push_back(op);
  }
  void erase(int q) {
    GenQueue& g = qs[q];
    long seq = g.live[rnd(g.live.size())];
    TraceOp op{TraceOp::Delete, q};
    op.seq = seq;
    out.push_back(op);
    g.remove(seq, key_of[seq]);
  }
  void meld(int a, int b) {
    int c = next_qid++;
    TraceOp op{TraceOp::Meld, a};
    op.q2 = b;
    op.q3 = c;
    out.push_back(op);
    GenQueue merged = std::move(qs[a]);
    GenQueue& gb = qs[b];
    for (long seq : gb.live) {
      merged.pos[seq] = merged.live.size();
      merged.live.push_back(seq);
      merged.ordered.emplace(key_of[seq], seq);
    }
    qs.erase(a);
    qs.erase(b);
    qs.emplace(c, std::move(merged));
  }
  int pick_queue() {
    std::size_t i = rnd(qs.size());
    for (auto& [id, g] : qs)
      if (i-- == 0) return id;
    return qs.begin()->first;
  }
};

}  // namespace

std::vector<TraceOp> generate_trace(const FuzzParams& p) {
  Gen g(p.seed);
  for (int i = 0; i < p.queues; ++i) g.new_queue();
  int total_w = p.w_insert + p.w_deletemin + p.w_decrease + p.w_delete + p.w_meld;
  for (long i = 0; i < p.ops; ++i) {
    while (int(g.qs.size()) < p.queues) g.new_queue();
    int q = g.pick_queue();
    int w = int(g.rnd(std::uint64_t(total_w)));
    GenQueue& gq = g.qs[q];
    if (w < p.w_insert || gq.live.empty()) {
      g.insert(q);
    } else if (w < p.w_insert + p.w_deletemin) {
      g.deletemin(q);
    } else if (w < p.w_insert + p.w_deletemin + p.w_decrease) {
      g.decrease(q);
    } else if (w < p.w_insert + p.w_deletemin + p.w_decrease + p.w_delete) {
      g.erase(q);
    } else if (g.qs.size() >= 2) {
      int b = g.pick_queue();
      if (b != q) g.meld(q, b);
      else g.insert(q);
    } else {
      g.insert(q);
    }
  }
  return g.out;
}

std::vector<TraceOp> generate_workload(const Workload& w) {
  Gen g(w.seed);
  int q = g.new_queue();
  auto drain_all = [&]() {
    while (!g.qs[q].live.empty()) g.deletemin(q);
  };
  if (w.name == "drain") {
    for (long i = 0; i < w.n; ++i) g.insert(q);
    drain_all();
  } else if (w.name == "sorted" || w.name == "reverse") {
    for (long i = 0; i < w.n; ++i) {
      long v = w.name == "sorted" ? i : w.n - 1 - i;
      TraceOp op{TraceOp::Insert, q};
      op.key = v;
      g.out.push_back(op);
      g.used.insert(v);
      g.key_of[g.next_seq] = v;
      g.qs[q].add(g.next_seq, v);
      ++g.next_seq;
    }
    drain_all();
  } else if (w.name == "random") {
    for (long i = 0; i < w.n; ++i) g.insert(q);
    for (long i = 0; i < w.n; ++i) {
      switch (g.rnd(4)) {
        case 0:
        case 1:
          g.insert(q);
          break;
        case 2:
          if (!g.qs[q].live.empty()) g.deletemin(q);
          break;
        default:
          if (!g.qs[q].live.empty()) g.decrease(q);
          break;
      }
    }
    drain_all();
  } else if (w.name == "dijkstra-like") {
    for (long i = 0; i < w.n; ++i) g.insert(q);
    while (!g.qs[q].live.empty()) {
      g.deletemin(q);
      for (int d = 0; d < w.dijkstra_decreases && !g.qs[q].live.empty(); ++d)
        g.decrease(q);
    }
  } else if (w.name == "meld-heavy") {
    long inserted = 1;
    g.insert(q);
    while (inserted < w.n) {
      int nq = g.new_queue();
      long k = 1 + long(g.rnd(8));
      for (long i = 0; i < k && inserted < w.n; ++i, ++inserted) g.insert(nq);
      g.meld(q, nq);
      q = g.next_qid - 1;
      if (g.rnd(4) == 0 && !g.qs[q].live.empty()) g.deletemin(q);
      if (g.rnd(2) == 0 && !g.qs[q].live.empty()) g.decrease(q);
    }
    drain_all();
  } else if (w.name == "decrease-heavy") {
    for (long i = 0; i < w.n; ++i) g.insert(q);
    for (long i = 0; i < 4 * w.n; ++i) {
      g.decrease(q);
      if (i % 16 == 15) g.deletemin(q);
      if (g.qs[q].live.empty()) break;
    }
    drain_all();
  } else {
    // unknown name: empty trace
  }
  return g.out;
}

}  // namespace optheap::harness
