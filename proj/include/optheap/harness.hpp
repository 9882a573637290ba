#ifndef OPTHEAP_HARNESS_HPP
#define OPTHEAP_HARNESS_HPP

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "queue.hpp"
#include "validate.hpp"

namespace optheap::harness {

using Key = std::int64_t;
using IQueue = PriorityQueue<Key>;
using INode = Node<Key>;

// --- traces ---

struct TraceOp {
  enum Kind { New, Insert, DeleteMin, Decrease, Delete, Meld, Destroy } kind;
  int q1 = -1;
  int q2 = -1;
  int q3 = -1;
  long seq = -1;  // 0-based insertion sequence number of the target node
  Key key = 0;
};

std::string format_op(const TraceOp& op);
void write_trace(std::ostream& os, const std::vector<TraceOp>& ops);

struct ParsedTrace {
  std::vector<TraceOp> ops;
  bool ok = true;
  std::string error;
  int error_line = 0;
};
ParsedTrace parse_trace(std::istream& is);

// --- sorted-multiset reference ---

class OracleQueue {
 public:
  void insert(Key k, long seq) {
    keys_.insert(k);
    seqs_[seq] = k;
  }
  bool empty() const { return keys_.empty(); }
  std::size_t size() const { return keys_.size(); }
  Key min() const { return *keys_.begin(); }
  void remove_min(Key k, long seq) { remove(k, seq); }
  void remove(Key k, long seq) {
    auto it = keys_.find(k);
    keys_.erase(it);
    seqs_.erase(seq);
  }
  bool contains_seq(long seq) const { return seqs_.count(seq) != 0; }
  Key key_of(long seq) const { return seqs_.at(seq); }
  void decrease(long seq, Key v) {
    auto it = keys_.find(seqs_.at(seq));
    keys_.erase(it);
    keys_.insert(v);
    seqs_[seq] = v;
  }
  void merge(OracleQueue&& o) {
    keys_.merge(o.keys_);
    seqs_.merge(o.seqs_);
  }

 private:
  std::multiset<Key> keys_;
  std::unordered_map<long, Key> seqs_;
};

// --- measurement ---

struct MeasureRow {
  std::string op;
  std::uint64_t n_bucket = 0;  // queue size at op time, rounded down to 2^k
  std::uint64_t count = 0;
  std::uint64_t max_comparisons = 0;
  double mean_comparisons = 0.0;
  std::uint64_t max_fixes = 0;
  std::uint64_t max_edits = 0;
};

class MeasureTable {
 public:
  void add(const char* op, std::size_t n, std::uint64_t cmp, std::uint64_t fixes,
           std::uint64_t edits);
  std::vector<MeasureRow> rows() const;
  // maxima per op type across every bucket
  std::uint64_t max_comparisons(const std::string& op) const;
  std::uint64_t max_edits(const std::string& op) const;
  void to_json(std::ostream& os, const QueueConfig& cfg) const;
  void to_csv(std::ostream& os) const;

 private:
  struct Cell {
    std::uint64_t count = 0;
    std::uint64_t sum_cmp = 0;
    std::uint64_t max_cmp = 0;
    std::uint64_t max_fixes = 0;
    std::uint64_t max_edits = 0;
  };
  std::map<std::pair<std::string, std::uint64_t>, Cell> cells_;
};

// --- trace execution ---

struct RunOptions {
  bool check_oracle = true;
  int validate_every = 0;  // 0 = never; 1 = after every operation
  QueueConfig config{};
  MeasureTable* measure = nullptr;
  std::ostream* dump_to = nullptr;
  int dump_every = 0;
};

struct RunResult {
  bool ok = true;
  std::string error;
  long failed_op = -1;  // index into the trace
  long executed = 0;
  std::size_t peak_space_units = 0;
  double peak_space_ratio = 0.0;  // aux units / live elements
  std::uint64_t max_deletemin_comparisons = 0;
  std::uint64_t max_increment_cmp = 0;  // per counter increment
  std::uint64_t max_decrement_cmp = 0;  // per counter decrement
};

RunResult run_trace(const std::vector<TraceOp>& ops, const RunOptions& opt);

// --- generation ---

struct FuzzParams {
  std::uint64_t seed = 1;
  long ops = 10000;
  int queues = 3;
  int w_insert = 6;
  int w_deletemin = 3;
  int w_decrease = 4;
  int w_delete = 1;
  int w_meld = 1;
};

std::vector<TraceOp> generate_trace(const FuzzParams& p);

struct Workload {
  std::string name;  // drain | sorted | reverse | random | dijkstra-like |
                     // meld-heavy | decrease-heavy
  long n = 1024;
  std::uint64_t seed = 1;
  int dijkstra_decreases = 4;
};

std::vector<TraceOp> generate_workload(const Workload& w);

// --- debug dump ---

std::string dump_tree(const INode* n);
std::string dump_queue(const IQueue& q);

}  // namespace optheap::harness

#endif
