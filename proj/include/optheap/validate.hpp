#ifndef OPTHEAP_VALIDATE_HPP
#define OPTHEAP_VALIDATE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "queue.hpp"

namespace optheap {

struct ValidationReport {
  std::vector<std::string> errors;
  std::size_t node_count = 0;
  int max_rank = 0;
  long active_violations = 0;
  long inactive_violations = 0;
  bool healthy() const { return errors.empty(); }
  std::string to_string() const {
    std::string s;
    for (const auto& e : errors) {
      s += e;
      s += '\n';
    }
    return s;
  }
};

// Full structural audit: rank rules, group rules, counter regularity and
// slot consistency, Fibonacci subtree sizes, rank and children bounds,
// violation-list wiring, heap-order soundness outside recorded violations,
// and the paper's three queue invariants.  O(n); test/diagnostic use only.
template <class T, class Compare>
ValidationReport validate_structure(const PriorityQueue<T, Compare>& q) {
  using NodeT = Node<T>;
  ValidationReport rep;
  auto fail = [&rep](std::string msg) { rep.errors.push_back(std::move(msg)); };

  const NodeT* t1 = q.t1();
  const NodeT* t2 = q.t2();
  if (!t1) {
    if (q.size() != 0) fail("size nonzero but t1 missing");
    if (t2) fail("t2 present without t1");
    return rep;
  }
  if (t1->right || t1->left) fail("t1 has sibling links");
  if (t2 && (t2->right || t2->left)) fail("t2 has sibling links");
  if (t2 && !(t1->rank < t2->rank)) fail("rank(t1) >= rank(t2)");

  // Collect every node, checking sibling-list wiring on the way.
  std::vector<const NodeT*> all;
  std::unordered_set<const NodeT*> seen;
  std::unordered_map<const NodeT*, const NodeT*> parent;
  std::vector<const NodeT*> stack;
  auto push_root = [&](const NodeT* r) {
    stack.push_back(r);
    seen.insert(r);
  };
  push_root(t1);
  if (t2) push_root(t2);
  while (!stack.empty()) {
    const NodeT* p = stack.back();
    stack.pop_back();
    all.push_back(p);
    if (p->rank > rep.max_rank) rep.max_rank = p->rank;
    // walk children last to first
    const NodeT* prev = nullptr;  // the child to the right
    for (const NodeT* c = p->last_child; c; c = c->left) {
      if (!seen.insert(c).second) {
        fail("node reached twice (cycle or shared subtree)");
        return rep;
      }
      parent[c] = p;
      if (prev == nullptr) {
        if (c->right != p) fail("last child's right pointer is not the parent");
      } else {
        if (c->right != prev) fail("broken sibling chain (right)");
        if (prev->left != c) fail("broken sibling chain (left)");
        if (c->rank > prev->rank) fail("children not in non-decreasing rank order");
      }
      prev = c;
      stack.push_back(c);
    }
    if (prev && prev->left != nullptr) fail("first child's left pointer not null");
  }
  rep.node_count = all.size();
  if (rep.node_count != q.size()) fail("reachable node count differs from size()");

  // Per-node rank sequence rules and Fibonacci sizes.
  std::unordered_map<const NodeT*, std::uint64_t> subtree;
  // compute sizes bottom-up: process `all` in reverse DFS completion order —
  // simplest is a second pass with explicit recursion over collected order.
  for (auto it = all.rbegin(); it != all.rend(); ++it) {
    const NodeT* p = *it;
    std::uint64_t sz = 1;
    for (const NodeT* c = p->last_child; c; c = c->left) sz += subtree[c];
    subtree[p] = sz;
  }
  auto fib = [](int r) {
    std::uint64_t a = 1, b = 1;  // F_0 = F_1 = 1
    for (int i = 0; i < r; ++i) {
      std::uint64_t n = a + b;
      a = b;
      b = n;
    }
    return a;
  };
  for (const NodeT* p : all) {
    if (p->last_child) {
      if (p->rank != p->last_child->rank + 1) fail("rank != 1 + rank(last child)");
    } else if (p->rank != 0) {
      fail("childless node with nonzero rank");
    }
    if (subtree[p] < fib(p->rank)) fail("subtree smaller than Fibonacci bound");

    // rank sequence of p's children
    std::vector<int> d(static_cast<std::size_t>(p->rank > 0 ? p->rank : 0), 0);
    for (const NodeT* c = p->last_child; c; c = c->left) {
      if (c->rank >= p->rank) {
        fail("child rank not below parent rank");
        continue;
      }
      ++d[static_cast<std::size_t>(c->rank)];
    }
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i] > 3) fail("more than three children of one rank");
      bool interior = i + 1 < d.size();
      if (interior && d[i] == 1) {
        bool lo = i > 0 && d[i - 1] != 0;
        bool hi = d[i + 1] != 0;
        if (!lo && !hi && !(d.size() == 1)) fail("isolated interior rank multiplicity 1");
      }
    }
    // non-root parents of rank >= 2 must keep a last group of >= 2 members
    bool is_root = p == t1 || p == t2;
    if (!is_root && p->rank >= 2 && p->last_child) {
      const NodeT* l = p->last_child;
      if (!(l->left && l->rank - l->left->rank <= 1))
        fail("last group of a non-root parent has one member");
    }
  }

  // Counter mirrors and regularity.
  auto check_counter = [&](const ExtendedRegularCounter<Node<T>*>& c, const NodeT* root,
                           const char* name) {
    if (!c.is_regular()) fail(std::string(name) + ": digit string not regular");
    if (static_cast<int>(c.length()) != root->rank)
      fail(std::string(name) + ": length differs from root rank");
    // slots vs actual child list
    std::vector<const NodeT*> via_list;
    for (const NodeT* ch = root->last_child; ch; ch = ch->left) via_list.push_back(ch);
    std::vector<const NodeT*> via_slots;
    for (std::size_t i = 0; i < c.length(); ++i) {
      for (int k = 0; k < c.tree_count(i); ++k) {
        const NodeT* tr = c.slot_tree(i, k);
        via_slots.push_back(tr);
        if (tr->rank != static_cast<int>(i))
          fail(std::string(name) + ": stored tree rank differs from slot index");
      }
    }
    if (via_list.size() != via_slots.size()) {
      fail(std::string(name) + ": slot tree count differs from child count");
      return;
    }
    // list runs must equal slot runs (list collected right-to-left)
    for (std::size_t k = 0; k < via_slots.size(); ++k) {
      if (via_slots[k] != via_list[via_list.size() - 1 - k]) {
        fail(std::string(name) + ": slot order differs from sibling-list order");
        break;
      }
    }
  };
  check_counter(q.counter1(), t1, "counter1");
  if (t2) check_counter(q.counter2(), t2, "counter2");

  // Rank and children bounds.
  if (rep.node_count > 0) {
    double lg = std::log2(static_cast<double>(rep.node_count));
    int cap = static_cast<int>(std::ceil(1.44 * lg));
    if (rep.max_rank > cap) fail("max rank exceeds ceil(1.44 lg n)");
    for (const NodeT* p : all) {
      int kids = 0;
      for (const NodeT* c = p->last_child; c; c = c->left) ++kids;
      if (kids > 2 * rep.max_rank && kids > 3)
        fail("node has more than 2 * max-rank children");
    }
  }

  // Violation bookkeeping.
  const ViolationStructure<T>* vs = q.violations();
  std::unordered_set<const NodeT*> active, inactive, recorded;
  long count_active = 0;
  for (const NodeT* v = vs->active_head(); v; v = v->vnext) {
    if (!active.insert(v).second) {
      fail("active list cycles");
      break;
    }
    ++count_active;
    if (!vs->is_active(v)) fail("active-list node not tagged active");
    if (v == t1 || v == t2) fail("root recorded as violation");
    if (parent.count(v) && parent[v] == t1) fail("child of t1 recorded as violation");
  }
  if (count_active != vs->active_count()) fail("active count out of sync");
  long count_inactive = 0;
  for (const NodeT* v = vs->inactive_head(); v; v = v->vnext) {
    if (!inactive.insert(v).second) {
      fail("inactive list cycles");
      break;
    }
    ++count_inactive;
    if (!vs->is_inactive(v)) fail("inactive-list node not tagged inactive");
    if (v == t1 || v == t2) fail("root recorded as violation");
    if (parent.count(v) && parent[v] == t1) fail("child of t1 recorded as violation");
  }
  if (count_inactive != vs->inactive_count()) fail("inactive count out of sync");
  rep.active_violations = count_active;
  rep.inactive_violations = count_inactive;

  // Per-rank entries: first pointers, consecutive runs, counts.
  long total_by_rank = 0;
  for (std::size_t rk = 0; rk < vs->size(); ++rk) {
    const auto& e = vs->entry(rk);
    total_by_rank += e.count;
    if ((e.count > 0) != (e.first != nullptr)) {
      fail("entry count/first mismatch");
      continue;
    }
    const NodeT* v = e.first;
    for (int k = 0; k < e.count; ++k) {
      if (!v || v->rank != static_cast<int>(rk)) {
        fail("active run shorter than its count or wrong rank");
        break;
      }
      v = v->vnext;
    }
    if (v && v->rank == static_cast<int>(rk) && vs->is_active(v))
      fail("active run longer than its count");
  }
  if (total_by_rank != count_active) fail("sum of entry counts differs from active list");

  // Recorded set: walk personal lists hanging off every node.
  recorded = active;
  recorded.insert(inactive.begin(), inactive.end());
  for (const NodeT* p : all) {
    int guard_len = 0;
    for (const NodeT* v = p->vhead; v; v = v->vnext) {
      if (!recorded.insert(v).second) {
        fail("node appears in two violation lists");
        break;
      }
      if (v->vtag == nullptr) fail("guarded record without a tag");
      if (v == p->vhead && v->vprev != p) fail("guarded list head does not point back at guard");
      if (!q.le_raw(p->element, v->element)) fail("guard larger than its record");
      ++guard_len;
      if (guard_len > static_cast<int>(all.size())) {
        fail("guarded list cycles");
        break;
      }
    }
    if (p == t1 && p->vhead) fail("t1 carries a personal guarded list");
  }

  // Heap-order soundness: any child smaller than its parent must be
  // recorded somewhere.
  for (const NodeT* p : all) {
    for (const NodeT* c = p->last_child; c; c = c->left) {
      bool violates = !q.le_raw(p->element, c->element);
      if (violates && recorded.find(c) == recorded.end())
        fail("unrecorded heap-order violation");
    }
  }

  // Invariant 1: the minimum is at t1.
  for (const NodeT* p : all)
    if (!q.le_raw(t1->element, p->element)) {
      fail("minimum is not at t1");
      break;
    }
  // Invariant 2 (by value): the smallest element other than t1's is matched
  // at t2, among the children of t1, or among t1's recorded violations.
  if (rep.node_count > 1) {
    const NodeT* second = nullptr;
    for (const NodeT* p : all) {
      if (p == t1) continue;
      if (!second || !q.le_raw(second->element, p->element)) second = p;
    }
    bool ok = false;
    auto matches = [&](const NodeT* c) {
      return c && q.le_raw(c->element, second->element);
    };
    if (matches(t2)) ok = true;
    for (const NodeT* c = t1->last_child; c && !ok; c = c->left) ok = matches(c);
    for (const NodeT* v = vs->active_head(); v && !ok; v = v->vnext) ok = matches(v);
    for (const NodeT* v = vs->inactive_head(); v && !ok; v = v->vnext) ok = matches(v);
    if (!ok) fail("second-smallest not at t2, a child of t1, or a violation of t1");
  }

  return rep;
}

}  // namespace optheap

#endif
