#include <cstdint>
#include <memory>
#include <vector>

#include "doctest.h"
#include "optheap/node.hpp"

using INode = optheap::Node<std::int64_t>;
using optheap::OpCounters;

namespace {

struct Arena {
  std::vector<std::unique_ptr<INode>> pool;
  INode* leaf(std::int64_t v) {
    pool.push_back(std::make_unique<INode>(v));
    return pool.back().get();
  }
};

struct Cmp {
  OpCounters* st;
  bool operator()(const std::int64_t& a, const std::int64_t& b) const {
    ++st->comparisons;
    return a <= b;  // le with first-argument-wins ties
  }
};

// minimal legal subtree of the given rank with elements >= floor
INode* build_minimal(Arena& a, int rank, std::int64_t floor, OpCounters& st) {
  INode* n = a.leaf(floor);
  if (rank == 0) return n;
  if (rank == 1) {
    optheap::attach_sole(n, build_minimal(a, 0, floor + 1, st), st);
  } else {
    optheap::attach_sole(n, build_minimal(a, rank - 2, floor + 1, st), st);
    optheap::attach_last(n, build_minimal(a, rank - 1, floor + 2, st), st);
  }
  n->rank = rank;
  return n;
}

// node whose children have exactly the given (non-decreasing) ranks
INode* build_with_children(Arena& a, const std::vector<int>& child_ranks, OpCounters& st) {
  INode* n = a.leaf(0);
  for (std::size_t i = 0; i < child_ranks.size(); ++i) {
    INode* c = build_minimal(a, child_ranks[i], std::int64_t(10 * (i + 1)), st);
    if (i == 0)
      optheap::attach_sole(n, c, st);
    else
      optheap::attach_last(n, c, st);
  }
  n->rank = child_ranks.empty() ? 0 : child_ranks.back() + 1;
  return n;
}

std::size_t subtree_size(const INode* n) {
  std::size_t s = 1;
  for (const INode* c = n->last_child; c; c = c->left) s += subtree_size(c);
  return s;
}

// node-local shape legality for a tree the structure can hold below t1:
// non-decreasing ranks, multiplicity <= 3, no isolated interior rank, at
// least two children for ranks >= 2, and a last group of two members unless
// the top is a regular-string style guarded singleton.
bool shape_ok(const INode* n) {
  if (!n->last_child) return n->rank == 0;
  if (n->rank != n->last_child->rank + 1) return false;
  std::vector<int> d(std::size_t(n->rank), 0);
  int prev = -1;
  int kid_count = 0;
  std::vector<const INode*> kids;
  for (const INode* c = n->last_child; c; c = c->left) kids.push_back(c);
  for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
    const INode* c = *it;
    ++kid_count;
    if (c->rank < prev) return false;
    prev = c->rank;
    if (c->rank >= n->rank) return false;
    if (++d[std::size_t(c->rank)] > 3) return false;
    if (!shape_ok(c)) return false;
  }
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    if (d[i] == 1) {
      bool lo = i > 0 && d[i - 1] != 0;
      bool hi = d[i + 1] != 0;
      if (!lo && !hi && d.size() > 1) return false;
    }
  }
  if (n->rank >= 2) {
    if (kid_count < 2) return false;
    std::size_t top = d.size() - 1;
    bool last_group_pair = d[top] >= 2 || (top >= 1 && d[top - 1] >= 1);
    bool guarded_singleton = d[top] == 1 && top >= 2 && d[top - 1] == 0 && d[top - 2] >= 1;
    if (!last_group_pair && !guarded_singleton) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("join puts the larger root below and costs one comparison") {
  Arena a;
  OpCounters st;
  Cmp le{&st};
  INode* x = a.leaf(3);
  INode* y = a.leaf(7);
  INode* w = optheap::join(x, y, le, st);
  CHECK(w == x);
  CHECK(w->rank == 1);
  CHECK(w->last_child == y);
  CHECK(y->right == x);
  CHECK(st.comparisons == 1);
}

TEST_CASE("join ties keep the first argument on top") {
  Arena a;
  OpCounters st;
  Cmp le{&st};
  INode* x = a.leaf(5);
  INode* y = a.leaf(5);
  CHECK(optheap::join(x, y, le, st) == x);
}

TEST_CASE("split of a two-leaf rank-1 group yields three trees") {
  // children ranks <0,0>: parent rank 1; detaching the last leaves a
  // singleton group, so that member comes off too
  Arena a;
  OpCounters st;
  INode* n = build_with_children(a, {0, 0}, st);
  auto parts = optheap::split(n, st);
  CHECK(parts.first->rank == 0);
  CHECK(parts.extra != nullptr);
  CHECK(parts.extra->rank == 0);
  CHECK(parts.remainder == n);
  CHECK(n->rank == 0);
  CHECK(st.comparisons == 0);
}

TEST_CASE("split with a healthy last group detaches only the last subtree") {
  // children ranks <1,1,2>: parent rank 3 -> rank-2 tree + remainder rank 2
  Arena a;
  OpCounters st;
  INode* n = build_with_children(a, {1, 1, 2}, st);
  auto parts = optheap::split(n, st);
  CHECK(parts.first->rank == 2);
  CHECK(parts.extra == nullptr);
  CHECK(n->rank == 2);
  CHECK(st.comparisons == 0);
}

TEST_CASE("exhaustive split outcomes over all legal shapes with <= 4 children") {
  // enumerate non-decreasing child-rank sequences, keep the legal ones,
  // split, and check the advertised outcome set
  std::vector<std::vector<int>> shapes;
  for (int a1 = 0; a1 <= 3; ++a1)
    for (int b = a1; b <= 4; ++b)
      for (int c = b; c <= 5; ++c)
        for (int d = c; d <= 6; ++d) shapes.push_back({a1, b, c, d});
  for (int a1 = 0; a1 <= 3; ++a1)
    for (int b = a1; b <= 4; ++b)
      for (int c = b; c <= 5; ++c) shapes.push_back({a1, b, c});
  for (int a1 = 0; a1 <= 3; ++a1)
    for (int b = a1; b <= 4; ++b) shapes.push_back({a1, b});
  for (int a1 = 0; a1 <= 2; ++a1) shapes.push_back({a1});

  int tested = 0;
  for (const auto& ranks : shapes) {
    Arena a;
    OpCounters st;
    INode* n = build_with_children(a, ranks, st);
    if (!shape_ok(n)) continue;
    int r = n->rank - 1;
    std::size_t before = subtree_size(n);
    auto parts = optheap::split(n, st);
    ++tested;
    CHECK(parts.first->rank == r);
    // one further tree has rank r-1, r or r+1
    int rr = parts.remainder->rank;
    int re = parts.extra ? parts.extra->rank : -100;
    bool partner_ok = (rr >= r - 1 && rr <= r + 1) || (re >= r - 1 && re <= r + 1);
    CHECK(partner_ok);
    // no nodes lost
    std::size_t after = subtree_size(parts.first) + subtree_size(parts.remainder) +
                        (parts.extra ? subtree_size(parts.extra) : 0);
    CHECK(before == after);
    // every part remains a legal shape
    CHECK(shape_ok(parts.first));
    CHECK(shape_ok(parts.remainder));
    if (parts.extra) CHECK(shape_ok(parts.extra));
  }
  CHECK(tested > 20);
}

TEST_CASE("detach_subtree repairs the singletons it leaves") {
  // children <0,0,2,3>: detaching a middle rank-0 child leaves the other
  // rank-0 child as a one-member group, which is detached as a repair
  Arena a;
  OpCounters st;
  INode* n = build_with_children(a, {0, 0, 2, 3}, st);
  INode* first = nullptr;
  for (INode* c = n->last_child; c; c = c->left) first = c;
  REQUIRE(first->rank == 0);
  CHECK(optheap::case1_eligible(first));
  auto res = optheap::detach_for_case1(first, st);
  CHECK(res.count == 2);
  CHECK(res.trees[0] == first);
  CHECK(res.trees[1]->rank == 0);
  CHECK(n->rank == 4);  // unchanged
  CHECK(shape_ok(n));
}

TEST_CASE("middle member of a three-member group detaches alone") {
  Arena a;
  OpCounters st;
  INode* n = build_with_children(a, {1, 1, 1}, st);
  INode* mid = n->last_child->left;
  CHECK(optheap::case1_eligible(mid));
  auto res = optheap::detach_for_case1(mid, st);
  CHECK(res.count == 1);
  CHECK(shape_ok(n));
}

TEST_CASE("last child is not case-1 eligible without an equal-rank partner") {
  Arena a;
  OpCounters st;
  INode* n = build_with_children(a, {1, 2}, st);
  CHECK_FALSE(optheap::case1_eligible(n->last_child));
}

TEST_CASE("double node swap restores the original structure") {
  Arena a;
  OpCounters st;
  INode* n = build_with_children(a, {0, 0, 1}, st);
  INode* x = n->last_child;        // rank 1
  INode* y = n->last_child->left;  // rank 0 sibling
  auto snapshot = [&]() {
    std::vector<std::pair<const INode*, std::vector<const INode*>>> shot;
    std::vector<const INode*> stack{n};
    while (!stack.empty()) {
      const INode* p = stack.back();
      stack.pop_back();
      std::vector<const INode*> kids;
      for (const INode* c = p->last_child; c; c = c->left) {
        kids.push_back(c);
        stack.push_back(c);
      }
      shot.emplace_back(p, kids);
    }
    return shot;
  };
  auto before = snapshot();
  optheap::swap_structural(x, y, st);
  optheap::swap_structural(x, y, st);
  CHECK(before == snapshot());
}

TEST_CASE("swap with itself is a no-op") {
  Arena a;
  OpCounters st;
  INode* n = build_with_children(a, {0, 0}, st);
  INode* x = n->last_child;
  optheap::swap_structural(x, x, st);
  CHECK(n->last_child == x);
}

TEST_CASE("swap exchanges positions between parent and child") {
  Arena a;
  OpCounters st;
  INode* n = build_with_children(a, {0, 0}, st);
  INode* x = n->last_child;
  optheap::swap_structural(n, x, st);
  // x is now the root holding both rank-0 children... i.e. the old layout
  // with the two nodes' identities exchanged
  CHECK(x->rank == 1);
  CHECK(n->rank == 0);
  CHECK(x->last_child == n);
  CHECK(n->right == x);
  CHECK(shape_ok(x));
}
