#ifndef OPTHEAP_NODE_HPP
#define OPTHEAP_NODE_HPP

#include <cassert>
#include <cstddef>
#include <utility>

#include "stats.hpp"

namespace optheap {

// Shared identity cell for violation-list membership.  All records of one
// queue's active (resp. inactive) list point at one tag; a meld retires the
// loser's tags in O(1), which demotes every record it had to a plain
// guarded-list entry without touching them.
struct ListTag {
  void* owner = nullptr;  // owning ViolationStructure, null once retired
  int kind = 0;           // 1 = active, 2 = inactive
  long refs = 0;
};

inline ListTag* tag_acquire(ListTag* t) {
  if (t) ++t->refs;
  return t;
}
inline void tag_release(ListTag* t) {
  if (t && --t->refs == 0) delete t;
}

// One element of a priority queue.  The caller allocates and frees nodes;
// the queue only links them.  right doubles as the parent pointer for last
// children; whether it means sibling or parent is decided by looking back
// at the target's last_child.
template <class T>
struct Node {
  T element{};
  int rank = 0;
  Node* left = nullptr;        // left sibling, null for a first child
  Node* right = nullptr;       // right sibling, or parent if last child
  Node* last_child = nullptr;  // rightmost (highest-rank) child
  Node* vhead = nullptr;       // guarded violation list
  Node* vprev = nullptr;       // membership links in some violation list;
  Node* vnext = nullptr;       //   the head's vprev points at its guard
  ListTag* vtag = nullptr;     // non-null iff recorded in some violation list

  Node() = default;
  explicit Node(T e) : element(std::move(e)) {}
};

template <class T>
bool is_last_child(const Node<T>* x) {
  return x->right != nullptr && x->right->last_child == x;
}

// Parent of x when x is a last child; null otherwise (parents of interior
// children are not reachable in O(1) and never needed).
template <class T>
Node<T>* parent_if_last(Node<T>* x) {
  return is_last_child(x) ? x->right : nullptr;
}

// Unlink x from its sibling list.  x keeps its own subtree.
template <class T>
void detach_child(Node<T>* x, OpCounters& st) {
  assert(x->right != nullptr);
  if (is_last_child(x)) {
    Node<T>* p = x->right;
    p->last_child = x->left;
    if (x->left) x->left->right = p;
  } else {
    Node<T>* r = x->right;
    r->left = x->left;
    if (x->left) x->left->right = r;
  }
  x->left = x->right = nullptr;
  ++st.structural_edits;
}

// Insert x immediately after sibling `after` (same child list).
template <class T>
void attach_after(Node<T>* after, Node<T>* x, OpCounters& st) {
  Node<T>* nxt = after->right;
  assert(nxt != nullptr);
  bool after_was_last = nxt->last_child == after;
  x->left = after;
  x->right = nxt;
  after->right = x;
  if (after_was_last)
    nxt->last_child = x;  // nxt is the parent
  else
    nxt->left = x;
  ++st.structural_edits;
}

// Insert x immediately before sibling `before`.
template <class T>
void attach_before(Node<T>* before, Node<T>* x, OpCounters& st) {
  x->left = before->left;
  x->right = before;
  if (before->left) before->left->right = x;
  before->left = x;
  ++st.structural_edits;
}

// Make x the only child of p.
template <class T>
void attach_sole(Node<T>* p, Node<T>* x, OpCounters& st) {
  assert(p->last_child == nullptr);
  p->last_child = x;
  x->right = p;
  x->left = nullptr;
  ++st.structural_edits;
}

// Append x as the new last child of p.
template <class T>
void attach_last(Node<T>* p, Node<T>* x, OpCounters& st) {
  Node<T>* old = p->last_child;
  if (!old) {
    attach_sole(p, x, st);
    return;
  }
  x->left = old;
  x->right = p;
  old->right = x;
  p->last_child = x;
  ++st.structural_edits;
}

// Join two detached trees of equal rank: the root with the larger element
// becomes the last child of the other.  One element comparison, done by the
// caller through `le` (a <= b, first argument wins ties).
template <class T, class LE>
Node<T>* join(Node<T>* a, Node<T>* b, LE&& le, OpCounters& st) {
  assert(a->rank == b->rank);
  assert(a->right == nullptr && b->right == nullptr);
  Node<T>* w = a;
  Node<T>* l = b;
  if (!le(a->element, b->element)) {
    w = b;
    l = a;
  }
  attach_last(w, l, st);
  ++w->rank;
  return w;
}

template <class T>
struct CoreSplit {
  Node<T>* first;      // detached last subtree, rank r
  Node<T>* remainder;  // the split node, rank recomputed
  Node<T>* extra;      // detached singleton member or null
};

// Split a detached tree of rank r+1: detach its last subtree; if the last
// group is left with one member, detach that member too.  No comparisons.
template <class T>
CoreSplit<T> split(Node<T>* a, OpCounters& st) {
  assert(a->rank >= 1 && a->last_child != nullptr);
  Node<T>* d = a->last_child;
  detach_child(d, st);
  Node<T>* extra = nullptr;
  Node<T>* l = a->last_child;
  if (l && (l->left == nullptr || l->rank - l->left->rank >= 2)) {
    extra = l;
    detach_child(l, st);
  }
  a->rank = a->last_child ? a->last_child->rank + 1 : 0;
  return {d, a, extra};
}

// Is y a one-member group among its siblings?
template <class T>
bool singleton_group(const Node<T>* y) {
  if (y->left && y->rank - y->left->rank <= 1) return false;
  if (!is_last_child(y) && y->right && y->right->rank - y->rank <= 1) return false;
  return true;
}

// Can x's subtree be detached without changing its parent's rank, without
// leaving the last group short, and without reducing the parent to a single
// child?  (Violation reduction, Case 1.)
template <class T>
bool case1_eligible(const Node<T>* x) {
  bool last = is_last_child(x);
  bool second_last = !last && x->right && is_last_child(x->right);
  if (!last && !second_last) {
    // Simulate the detach and its singleton repairs; the parent must keep
    // at least two children (a lone child of a rank >= 2 parent would break
    // the Fibonacci machinery on a later split).
    const Node<T>* l = x->left;
    const Node<T>* r = x->right;  // a true sibling
    const Node<T>* ll = l ? l->left : nullptr;
    bool l_goes = false;
    if (l && !is_last_child(l)) {
      bool lone_left = ll == nullptr || l->rank - ll->rank >= 2;
      bool lone_right = r->rank - l->rank >= 2;
      l_goes = lone_left && lone_right;
    }
    bool r_goes = false;
    if (!is_last_child(r)) {
      const Node<T>* left_nb = l_goes ? ll : l;
      bool lone_left = left_nb == nullptr || r->rank - left_nb->rank >= 2;
      bool lone_right = r->right->rank - r->rank >= 2;  // a sibling: r not last
      r_goes = lone_left && lone_right;
    }
    int survivors = 0;
    if (l && !l_goes) ++survivors;
    if (ll) {
      ++survivors;
      if (ll->left) ++survivors;
    }
    if (!r_goes) ++survivors;
    if (!is_last_child(r) && r->right) {
      ++survivors;
      if (!is_last_child(r->right) && r->right->right) ++survivors;
    }
    return survivors >= 2;
  }
  // Extended eligibility: the last group must keep two members and the
  // parent's rank must survive.
  if (last) {
    const Node<T>* s = x->left;
    if (!s || s->rank != x->rank) return false;  // rank would drop
    // group after removal: s plus at least one more connected member
    return s->left != nullptr && s->rank - s->left->rank <= 1;
  }
  // second-last: the last child keeps the parent's rank; the last group may
  // not shrink from two members to one
  const Node<T>* s = x->right;               // the last child
  if (s->rank - x->rank >= 2) return false;  // last group stays a singleton
  const Node<T>* l = x->left;
  return l != nullptr && s->rank - l->rank <= 1;
}

template <class T>
struct DetachResult {
  Node<T>* trees[3];
  int count = 0;
  void push(Node<T>* t) {
    assert(count < 3);
    trees[count++] = t;
  }
};

// Detach x's subtree from a position where the parent's rank is unaffected
// (not the last child), repairing up to two interior singleton groups left
// behind.  The last group is never touched by construction.
template <class T>
DetachResult<T> detach_subtree(Node<T>* x, OpCounters& st) {
  assert(x->right != nullptr);
  assert(!is_last_child(x));
  Node<T>* lside = x->left;
  Node<T>* rside = x->right;  // a true sibling since x is not last
  DetachResult<T> out;
  detach_child(x, st);
  out.push(x);
  if (lside && singleton_group(lside) && !is_last_child(lside)) {
    detach_child(lside, st);
    out.push(lside);
  }
  if (rside && singleton_group(rside) && !is_last_child(rside)) {
    detach_child(rside, st);
    out.push(rside);
  }
  return out;
}

// Detach an eligible x per Case 1, repairing singleton groups it leaves.
template <class T>
DetachResult<T> detach_for_case1(Node<T>* x, OpCounters& st) {
  assert(case1_eligible(x));
  bool last = is_last_child(x);
  bool second_last = !last && x->right && is_last_child(x->right);
  if (!last && !second_last) return detach_subtree(x, st);
  DetachResult<T> out;
  Node<T>* l = x->left;
  detach_child(x, st);
  out.push(x);
  if (second_last && l && singleton_group(l) && !is_last_child(l)) {
    detach_child(l, st);
    out.push(l);
  }
  return out;
}

// Exchange the structural positions of x and y: linkage, rank, guarded list
// and violation membership move with the position; elements and handle
// identity stay with the nodes.  Counter slots and the violation array are
// re-targeted by the caller.
template <class T>
void swap_structural(Node<T>* x, Node<T>* y, OpCounters& st) {
  if (x == y) return;
  std::swap(x->rank, y->rank);
  std::swap(x->left, y->left);
  std::swap(x->right, y->right);
  std::swap(x->last_child, y->last_child);
  std::swap(x->vhead, y->vhead);
  std::swap(x->vprev, y->vprev);
  std::swap(x->vnext, y->vnext);
  std::swap(x->vtag, y->vtag);
  // Self references arise when the two were adjacent or related.
  auto norm = [&](Node<T>*& f, Node<T>* self, Node<T>* other) {
    if (f == self) f = other;
  };
  for (auto [n, o] : {std::pair{x, y}, std::pair{y, x}}) {
    norm(n->left, n, o);
    norm(n->right, n, o);
    norm(n->last_child, n, o);
    norm(n->vprev, n, o);
    norm(n->vnext, n, o);
    norm(n->vhead, n, o);
  }
  // Incoming pointers from the new neighborhoods.
  for (Node<T>* n : {x, y}) {
    if (n->left) n->left->right = n;
    if (n->right) {
      // right is the parent iff n is now the last child; detect via the
      // parent's last_child, which may still point at the other swappee.
      Node<T>* other = n == x ? y : x;
      if (n->right->last_child == other || n->right->last_child == n)
        n->right->last_child = n;
      else
        n->right->left = n;
    }
    if (n->last_child) n->last_child->right = n;
    if (n->vprev) {
      // vprev is the guard iff its vhead points back here.
      Node<T>* other = n == x ? y : x;
      if (n->vprev->vhead == other || n->vprev->vhead == n)
        n->vprev->vhead = n;
      else
        n->vprev->vnext = n;
    }
    if (n->vnext) n->vnext->vprev = n;
    if (n->vhead) n->vhead->vprev = n;
  }
  ++st.structural_edits;
}

// Put `filler` exactly where `hole_left`/`hole_right` used to flank a
// removed child (splice into the vacated position).
template <class T>
void splice_into_gap(Node<T>* hole_left, Node<T>* hole_right, bool was_last,
                     Node<T>* filler, OpCounters& st) {
  filler->left = hole_left;
  filler->right = hole_right;
  if (hole_left) hole_left->right = filler;
  assert(hole_right != nullptr);
  if (was_last)
    hole_right->last_child = filler;
  else
    hole_right->left = filler;
  ++st.structural_edits;
}

}  // namespace optheap

#endif
