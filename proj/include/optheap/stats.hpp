#ifndef OPTHEAP_STATS_HPP
#define OPTHEAP_STATS_HPP

#include <cstdint>

namespace optheap {

// Cumulative instrumentation counters owned by a queue (or a standalone
// counter under test).  Harness code snapshots them around an operation to
// obtain per-op figures.
struct OpCounters {
  std::uint64_t comparisons = 0;
  std::uint64_t structural_edits = 0;
  std::uint64_t digit_writes = 0;
  std::uint64_t fixes = 0;
  std::uint64_t increments = 0;
  std::uint64_t decrements = 0;
  std::uint64_t reductions_by_case[6] = {0, 0, 0, 0, 0, 0};  // [1..5] used
  std::uint64_t case3b_guard_records = 0;  // replacement root recorded for safety
  // worst element-comparison cost of one counter increment / decrement
  // (the decrement figure includes re-adding deferred split leftovers)
  std::uint64_t max_increment_comparisons = 0;
  std::uint64_t max_decrement_comparisons = 0;

  std::uint64_t reductions_total() const {
    std::uint64_t n = 0;
    for (int i = 1; i <= 5; ++i) n += reductions_by_case[i];
    return n;
  }

  OpCounters& operator+=(const OpCounters& o) {
    comparisons += o.comparisons;
    structural_edits += o.structural_edits;
    digit_writes += o.digit_writes;
    fixes += o.fixes;
    increments += o.increments;
    decrements += o.decrements;
    for (int i = 0; i < 6; ++i) reductions_by_case[i] += o.reductions_by_case[i];
    case3b_guard_records += o.case3b_guard_records;
    if (o.max_increment_comparisons > max_increment_comparisons)
      max_increment_comparisons = o.max_increment_comparisons;
    if (o.max_decrement_comparisons > max_decrement_comparisons)
      max_decrement_comparisons = o.max_decrement_comparisons;
    return *this;
  }
};

}  // namespace optheap

#endif
