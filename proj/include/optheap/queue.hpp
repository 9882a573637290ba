#ifndef OPTHEAP_QUEUE_HPP
#define OPTHEAP_QUEUE_HPP

#include <cassert>
#include <cstddef>
#include <functional>
#include <list>
#include <memory>
#include <utility>
#include <vector>

#include "counter.hpp"
#include "errors.hpp"
#include "node.hpp"
#include "stats.hpp"
#include "violations.hpp"

namespace optheap {

struct QueueConfig {
  int extension_rate = 4;  // violation-array entries added per insert/decrease/meld
  int transfer_steps = 2;  // child moves from below t2 per decrease/meld
  int reclaim_budget = 8;  // space units released from the pile per operation
};

// Meldable priority queue over two multi-way trees T1 and T2 whose roots'
// rank sequences are kept as extended regular binary counters, with a
// violation structure for decreased keys.  find-min, insert, decrease and
// meld run in worst-case constant time; delete and delete-min in O(lg n).
// Nodes are allocated and freed by the caller; the queue only links them.
template <class T, class Compare = std::less<T>>
class PriorityQueue {
 public:
  using node_type = Node<T>;

  PriorityQueue() : PriorityQueue(QueueConfig{}) {}
  explicit PriorityQueue(QueueConfig cfg, Compare comp = Compare())
      : comp_(std::move(comp)), cfg_(cfg), vs_(std::make_unique<ViolationStructure<T>>()) {
    c1_.set_stats(&stats_);
    c2_.set_stats(&stats_);
  }

  PriorityQueue(PriorityQueue&& o) noexcept { steal(std::move(o)); }
  PriorityQueue& operator=(PriorityQueue&& o) noexcept {
    if (this != &o) steal(std::move(o));
    return *this;
  }
  PriorityQueue(const PriorityQueue&) = delete;
  PriorityQueue& operator=(const PriorityQueue&) = delete;

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  const OpCounters& counters() const { return stats_; }
  const QueueConfig& config() const { return cfg_; }

  // Auxiliary space in object slots: both counters, the violation array and
  // the unreleased pile.
  std::size_t retained_space_units() const {
    return c1_.capacity() + c2_.capacity() + vs_->array_capacity() + pile_units_;
  }

  Node<T>* find_min() const {
    if (!t1_) throw empty_error{};
    return t1_;
  }

  // x: caller-owned, detached, rank 0, element set.
  void insert(Node<T>* x) {
    assert(x && x->right == nullptr && x->left == nullptr && x->last_child == nullptr);
    assert(x->rank == 0 && x->vtag == nullptr && x->vhead == nullptr);
    if (!t1_) {
      t1_ = x;
      size_ = 1;
      vs_->extend(cfg_.extension_rate, max_rank(), stats_);
      reclaim_step();
      return;
    }
    Node<T>* y = x;
    if (lt(x->element, t1_->element)) {
      y = t1_;
      swap_with_root(x);
    }
    add_below_t1(y);
    ++size_;
    vs_->extend(cfg_.extension_rate, max_rank(), stats_);
    maybe_absorb_t2();  // an increment can raise rank(t1) to rank(t2)
    reclaim_step();
  }

  void decrease(Node<T>* x, const T& v) {
    assert(x);
    if (lt(x->element, v)) throw contract_error("decrease: new element is greater");
    x->element = v;
    if (x != t1_ && lt(x->element, t1_->element)) swap_with_root(x);
    if (x != t1_ && x != t2_ && !is_child_of_t1(x)) {
      vs_->remove_any(x);
      vs_->record(x);
    }
    vs_->extend(cfg_.extension_rate, max_rank(), stats_);
    run_transfer_steps();
    if (!t2_ && vs_->reduction_possible()) reduce_once();
    reclaim_step();
  }

  Node<T>* delete_min() {
    if (!t1_) throw empty_error{};
    fold_in_t2();
    vs_->ensure_size(static_cast<std::size_t>(t1_->rank) + 1, stats_);

    // New minimum: scan children of t1, then active, then inactive records.
    Node<T>* best = nullptr;
    bool best_is_child = false;
    for (std::size_t i = 0; i < c1_.length(); ++i)
      for (int k = 0; k < c1_.tree_count(i); ++k) {
        Node<T>* c = c1_.slot_tree(i, k);
        if (!best || lt(c->element, best->element)) {
          best = c;
          best_is_child = true;
        }
      }
    for (Node<T>* v = vs_->active_head(); v; v = v->vnext)
      if (lt(v->element, best->element)) {  // children exist whenever records do
        best = v;
        best_is_child = false;
      }
    for (Node<T>* v = vs_->inactive_head(); v; v = v->vnext)
      if (lt(v->element, best->element)) {
        best = v;
        best_is_child = false;
      }

    Node<T>* ret = t1_;
    if (!best) {  // t1 was the only node
      t1_ = nullptr;
      size_ = 0;
      scrub(ret);
      reclaim_step();
      return ret;
    }

    Node<T>* x = best;
    if (best_is_child) {
      remove_below_t1_specific(x->rank, x);
    } else {
      // Swap a tree of the same rank into x's place and mark it violating.
      vs_->remove_any(x);
      Node<T>* hl = x->left;
      Node<T>* hr = x->right;
      bool was_last = is_last_child(x);
      detach_child(x, stats_);
      Node<T>* y = remove_below_t1(x->rank);
      splice_into_gap(hl, hr, was_last, y, stats_);
      vs_->record(y);
    }

    // x's old children join t1's, in rank order.
    {
      std::vector<Node<T>*> kids;
      for (Node<T>* c = x->last_child; c; c = c->left) kids.push_back(c);
      x->last_child = nullptr;
      for (std::size_t i = kids.size(); i-- > 0;) {
        kids[i]->left = kids[i]->right = nullptr;
        ++stats_.structural_edits;
        add_below_t1(kids[i]);
      }
    }

    vs_->activate_inactive();
    while (x->vhead) {  // x's guarded violations enter the array
      Node<T>* v = x->vhead;
      vs_->remove_any(v);
      vs_->record(v);
    }

    // x replaces the old root.
    x->left = x->right = nullptr;
    x->last_child = ret->last_child;
    if (x->last_child) x->last_child->right = x;
    ret->last_child = nullptr;
    x->rank = static_cast<int>(c1_.length());
    t1_ = x;
    --size_;
    scrub(ret);

    while (vs_->reduction_possible()) reduce_once();
    reclaim_step();
    return ret;
  }

  // Remove an arbitrary node (ownership returns to the caller).
  void erase(Node<T>* x) {
    if (!t1_) throw empty_error{};
    if (x != t1_) {
      Node<T>* z = t1_;
      swap_with_root(x);
      // z now sits where x was and is marked violating unless it became t2
      // or a child of t1 (where records are never kept).
      if (z != t2_ && !is_child_of_t1(z)) {
        vs_->remove_any(z);  // membership inherited from x's old position
        vs_->record(z);
      }
    }
    Node<T>* ret = delete_min();
    assert(ret == x);
    (void)ret;
  }

  static PriorityQueue meld(PriorityQueue&& qa, PriorityQueue&& qb) {
    if (&qa == &qb) throw contract_error("meld: queue melded with itself");
    if (!qa.t1_) return absorb_empty(std::move(qb), std::move(qa));
    if (!qb.t1_) return absorb_empty(std::move(qa), std::move(qb));

    bool a_wins = qa.le(qa.t1_->element, qb.t1_->element);
    PriorityQueue w = a_wins ? std::move(qa) : std::move(qb);
    PriorityQueue l = a_wins ? std::move(qb) : std::move(qa);
    w.stats_ += l.stats_;
    std::size_t l_size = l.size_;

    // The loser's records become the personal guarded list of its old root.
    Node<T>* g = l.t1_;
    assert(g->vhead == nullptr);
    Node<T>* ph = l.vs_->convert_to_personal();
    if (ph) {
      g->vhead = ph;
      ph->vprev = g;
    }
    l.vs_->dismiss_array_into(w.pile_sink());

    struct Cand {
      Node<T>* root = nullptr;
      ExtendedRegularCounter<Node<T>*> ctr;
    };
    Cand cand[3];
    int nc = 0;
    if (w.t2_) {
      cand[nc].root = w.t2_;
      cand[nc++].ctr = std::move(w.c2_);
    }
    cand[nc].root = g;
    cand[nc++].ctr = std::move(l.c1_);
    if (l.t2_) {
      cand[nc].root = l.t2_;
      cand[nc++].ctr = std::move(l.c2_);
    }
    w.t2_ = nullptr;
    w.c2_ = ExtendedRegularCounter<Node<T>*>{};
    w.c2_.set_stats(&w.stats_);
    l.t1_ = l.t2_ = nullptr;
    l.size_ = 0;

    int s = -1;
    for (int i = 0; i < nc; ++i)
      if (s < 0 || cand[i].root->rank > cand[s].root->rank) s = i;

    if (cand[s].root->rank <= w.t1_->rank) {
      // T1 keeps the maximum rank: everything goes below t1.
      for (int i = 0; i < nc; ++i) {
        cand[i].ctr.dismiss_into(w.pile_sink());
        w.add_below_t1(cand[i].root);
      }
    } else {
      w.t2_ = cand[s].root;
      w.c2_ = std::move(cand[s].ctr);
      w.c2_.set_stats(&w.stats_);
      for (int i = 0; i < nc; ++i) {
        if (i == s) continue;
        cand[i].ctr.dismiss_into(w.pile_sink());
        CounterCB cb{&w, 2};
        w.c2_.increment(static_cast<std::size_t>(cand[i].root->rank), cand[i].root, cb);
        w.t2_->rank = static_cast<int>(w.c2_.length());
        w.vs_->record(cand[i].root);
      }
    }

    w.size_ += l_size;
    w.pile_.splice(w.pile_.end(), l.pile_);
    w.pile_units_ += l.pile_units_;
    l.pile_units_ = 0;

    w.vs_->extend(w.cfg_.extension_rate, w.max_rank(), w.stats_);
    w.run_transfer_steps();
    for (int k = 0; k < 2; ++k)
      if (!w.t2_ && w.vs_->reduction_possible()) w.reduce_once();
    w.reclaim_step();
    return w;
  }

  // Release auxiliary storage; the queue must be empty.
  void destroy() {
    if (size_ != 0) throw not_empty_error{};
    c1_ = ExtendedRegularCounter<Node<T>*>{};
    c2_ = ExtendedRegularCounter<Node<T>*>{};
    c1_.set_stats(&stats_);
    c2_.set_stats(&stats_);
    vs_ = std::make_unique<ViolationStructure<T>>();
    pile_.clear();
    pile_units_ = 0;
    t1_ = t2_ = nullptr;
  }

  // --- introspection for the harness/validator ---

  Node<T>* t1() const { return t1_; }
  Node<T>* t2() const { return t2_; }
  const ExtendedRegularCounter<Node<T>*>& counter1() const { return c1_; }
  const ExtendedRegularCounter<Node<T>*>& counter2() const { return c2_; }
  const ViolationStructure<T>* violations() const { return vs_.get(); }
  bool le_raw(const T& a, const T& b) const { return !comp_(b, a); }

 private:
  struct CounterCB {
    static constexpr bool structural = true;
    PriorityQueue* q;
    int owner;  // 1 = below t1, 2 = below t2

    Node<T>* root() const { return owner == 1 ? q->t1_ : q->t2_; }

    Node<T>* join(Node<T>* a, Node<T>* b) { return q->join_trees(a, b); }

    SplitParts<Node<T>*> split(Node<T>* t, int rank) {
      assert(t->rank == rank);
      (void)rank;
      bool act = q->vs_->is_active(t);
      int old = t->rank;
      CoreSplit<T> s = optheap::split(t, q->stats_);
      if (act && s.remainder->rank != old) q->vs_->re_slot(s.remainder, old);
      SplitParts<Node<T>*> p;
      p.first = s.first;
      p.remainder = s.remainder;
      p.remainder_rank = s.remainder->rank;
      if (s.extra) {
        p.extra = s.extra;
        p.extra_rank = s.extra->rank;
        p.has_extra = true;
      }
      return p;
    }

    void attach(Node<T>* t, int rank, Node<T>* anchor, bool before) {
      (void)rank;
      if (owner == 1) q->vs_->remove_any(t);  // below t1, no longer violating
      if (before)
        attach_before(anchor, t, q->stats_);
      else
        attach_after(anchor, t, q->stats_);
    }

    void attach_sole(Node<T>* t, int rank) {
      (void)rank;
      if (owner == 1) q->vs_->remove_any(t);
      optheap::attach_sole(root(), t, q->stats_);
    }

    void detach(Node<T>* t, int rank) {
      (void)rank;
      detach_child(t, q->stats_);
    }
  };
  friend struct CounterCB;

  void steal(PriorityQueue&& o) {
    comp_ = std::move(o.comp_);
    cfg_ = o.cfg_;
    t1_ = o.t1_;
    t2_ = o.t2_;
    c1_ = std::move(o.c1_);
    c2_ = std::move(o.c2_);
    vs_ = std::move(o.vs_);
    pile_ = std::move(o.pile_);
    pile_units_ = o.pile_units_;
    size_ = o.size_;
    stats_ = o.stats_;
    c1_.set_stats(&stats_);
    c2_.set_stats(&stats_);
    o.t1_ = o.t2_ = nullptr;
    o.size_ = 0;
    o.pile_units_ = 0;
  }

  bool lt(const T& a, const T& b) {
    ++stats_.comparisons;
    return comp_(a, b);
  }
  bool le(const T& a, const T& b) {
    ++stats_.comparisons;
    return !comp_(b, a);
  }

  int max_rank() const { return t2_ ? t2_->rank : (t1_ ? t1_->rank : 0); }

  bool is_child_of_t1(const Node<T>* x) const {
    return t1_ && c1_.slot_contains(static_cast<std::size_t>(x->rank),
                                    const_cast<Node<T>*>(x));
  }

  Node<T>* join_trees(Node<T>* a, Node<T>* b) {
    bool aw = vs_->is_active(a);
    bool bw = vs_->is_active(b);
    Node<T>* w = optheap::join(
        a, b, [this](const T& x, const T& y) { return le(x, y); }, stats_);
    if ((w == a && aw) || (w == b && bw)) vs_->re_slot(w, w->rank - 1);
    return w;
  }

  auto pile_sink() {
    return [this](std::shared_ptr<void> p, std::size_t units) {
      pile_.emplace_back(std::move(p), units);
      pile_units_ += units;
    };
  }

  void reclaim_step() {
    std::size_t released = 0;
    while (!pile_.empty() && released < static_cast<std::size_t>(cfg_.reclaim_budget)) {
      released += pile_.front().second == 0 ? 1 : pile_.front().second;
      pile_units_ -= pile_.front().second;
      pile_.pop_front();
    }
  }

  void add_below_t1(Node<T>* x) {
    CounterCB cb{this, 1};
    std::uint64_t c0 = stats_.comparisons;
    c1_.increment(static_cast<std::size_t>(x->rank), x, cb);
    t1_->rank = static_cast<int>(c1_.length());
    std::uint64_t d = stats_.comparisons - c0;
    if (d > stats_.max_increment_comparisons) stats_.max_increment_comparisons = d;
  }

  void flush_deferred(DeferredTrees<Node<T>*>& d) {
    // ascending rank, stable, for deterministic replay
    for (int i = 1; i < d.count; ++i)
      for (int j = i; j > 0 && d.items[j].second < d.items[j - 1].second; --j)
        std::swap(d.items[j], d.items[j - 1]);
    for (int i = 0; i < d.count; ++i) add_below_t1(d.items[i].first);
  }

  Node<T>* remove_below_t1(int rank) {
    CounterCB cb{this, 1};
    DeferredTrees<Node<T>*> d;
    std::uint64_t c0 = stats_.comparisons;
    Node<T>* x = c1_.decrement(static_cast<std::size_t>(rank), cb, d);
    t1_->rank = static_cast<int>(c1_.length());
    flush_deferred(d);
    note_decrement_cost(stats_.comparisons - c0);
    return x;
  }

  void remove_below_t1_specific(int rank, Node<T>* target) {
    CounterCB cb{this, 1};
    DeferredTrees<Node<T>*> d;
    std::uint64_t c0 = stats_.comparisons;
    Node<T>* x = c1_.decrement_specific(static_cast<std::size_t>(rank), target, cb, d);
    assert(x == target);
    (void)x;
    t1_->rank = static_cast<int>(c1_.length());
    flush_deferred(d);
    note_decrement_cost(stats_.comparisons - c0);
  }

  void note_decrement_cost(std::uint64_t d) {
    if (d > stats_.max_decrement_comparisons) stats_.max_decrement_comparisons = d;
  }

  void maybe_absorb_t2() {
    if (t2_ && t2_->rank <= t1_->rank) {
      Node<T>* s = t2_;
      t2_ = nullptr;
      c2_.dismiss_into(pile_sink());
      add_below_t1(s);
    }
  }

  void run_transfer_steps() {
    for (int k = 0; k < cfg_.transfer_steps; ++k) {
      if (!t2_) break;
      if (t2_->rank <= t1_->rank) break;
      CounterCB cb{this, 2};
      DeferredTrees<Node<T>*> d;
      std::uint64_t c0 = stats_.comparisons;
      Node<T>* y = c2_.decrement(static_cast<std::size_t>(t1_->rank), cb, d);
      t2_->rank = static_cast<int>(c2_.length());
      flush_deferred(d);
      note_decrement_cost(stats_.comparisons - c0);
      add_below_t1(y);
    }
    maybe_absorb_t2();
  }

  // delete-min step 1: disassemble T2 below t1, smallest ranks first.
  void fold_in_t2() {
    if (!t2_) return;
    Node<T>* s = t2_;
    std::vector<Node<T>*> kids;
    for (std::size_t i = 0; i < c2_.length(); ++i)
      for (int k = 0; k < c2_.tree_count(i); ++k) kids.push_back(c2_.slot_tree(i, k));
    t2_ = nullptr;
    c2_.dismiss_into(pile_sink());
    for (Node<T>* c : kids) {
      c->left = c->right = nullptr;
      ++stats_.structural_edits;
    }
    s->last_child = nullptr;
    s->rank = 0;
    add_below_t1(s);
    for (Node<T>* c : kids) add_below_t1(c);
  }

  void swap_with_root(Node<T>* x) {
    if (x == t1_) return;
    bool s1 = c1_.slot_contains(static_cast<std::size_t>(x->rank), x);
    bool s2 = t2_ && x != t2_ && c2_.slot_contains(static_cast<std::size_t>(x->rank), x);
    Node<T>* z = t1_;
    bool was_t2 = x == t2_;
    swap_structural(x, z, stats_);
    if (s1) c1_.swap_slot_entry(static_cast<std::size_t>(z->rank), x, z);
    if (s2) c2_.swap_slot_entry(static_cast<std::size_t>(z->rank), x, z);
    vs_->replace_first(z->rank, x, z);
    if (was_t2) t2_ = z;
    t1_ = x;
  }

  void scrub(Node<T>* n) {
    assert(n->vtag == nullptr && n->vhead == nullptr);
    n->left = n->right = n->last_child = nullptr;
    n->rank = 0;
  }

  static PriorityQueue absorb_empty(PriorityQueue&& keep, PriorityQueue&& e) {
    PriorityQueue k = std::move(keep);
    k.stats_ += e.stats_;
    e.vs_->dismiss_array_into(k.pile_sink());
    e.c1_.dismiss_into(k.pile_sink());
    e.c2_.dismiss_into(k.pile_sink());
    k.pile_.splice(k.pile_.end(), e.pile_);
    k.pile_units_ += e.pile_units_;
    e.pile_units_ = 0;
    k.reclaim_step();
    return k;
  }

  // ---- violation reductions ----

  struct Hole {
    Node<T>* left;
    Node<T>* right;
    bool was_last;
  };

  // One chosen violation with the other member of its group's last two and
  // its parent (operation-local labels, not persistent state).
  struct Actor {
    Node<T>* x;
    Node<T>* s;
    Node<T>* p;
  };

  Hole carve(Node<T>* p) {
    Hole h{p->left, p->right, is_last_child(p)};
    detach_child(p, stats_);
    return h;
  }

  static int recomputed_rank(Node<T>* p) {
    return p->last_child ? p->last_child->rank + 1 : 0;
  }

  // Detach p's new last child if it is a singleton group member.
  Node<T>* take_last_singleton(Node<T>* p) {
    Node<T>* m = p->last_child;
    if (m && singleton_group(m)) {
      detach_child(m, stats_);
      return m;
    }
    return nullptr;
  }

  // Insert `t` among p's children next to `near`, keeping non-decreasing
  // rank order.  Bounded walk: at most one group.
  void place_by_rank_near(Node<T>* p, Node<T>* near, Node<T>* t) {
    if (!near) {
      optheap::attach_sole(p, t, stats_);
      return;
    }
    if (t->rank >= near->rank) {
      attach_after(near, t, stats_);
      return;
    }
    Node<T>* pos = near;
    while (pos->left && pos->left->rank > t->rank) pos = pos->left;
    attach_before(pos, t, stats_);
  }

  // Degenerate reduction: x sits at its parent's tail without a usable
  // group mate (or with one that cannot transplant anywhere).  The parent
  // is dismantled outright, its place refilled from below t1.
  void reduce_pipeline_one(Actor A) {
    Node<T>* p = A.p;
    int q = p->rank;
    bool t1m = is_child_of_t1(p);
    if (t1m) remove_below_t1_specific(q, p);
    detach_child(A.x, stats_);
    if (A.s) detach_child(A.s, stats_);
    Node<T>* sing = take_last_singleton(p);
    Node<T>* fill = nullptr;
    Hole h{};
    if (!t1m) h = carve(p);
    p->rank = recomputed_rank(p);
    if (!t1m) {
      fill = remove_below_t1(q);
      vs_->record(fill);
      splice_into_gap(h.left, h.right, h.was_last, fill, stats_);
    }
    add_below_t1(A.x);
    if (A.s) add_below_t1(A.s);
    if (sing) add_below_t1(sing);
    add_below_t1(p);
  }

  // Blocked interior member: every removal path would leave the parent a
  // bare chain, so the parent (necessarily tiny: x's group plus a gapped
  // singleton last group) is stripped entirely.
  void reduce_dismantle(Node<T>* x) {
    // find the last child by walking right over x's bounded group
    Node<T>* last = x;
    int steps = 0;
    while (!is_last_child(last)) {
      last = last->right;
      assert(++steps < 8);
      (void)steps;
    }
    Node<T>* p = last->right;
    int q = p->rank;
    bool t1m = is_child_of_t1(p);
    if (t1m) remove_below_t1_specific(q, p);
    Node<T>* shards[5];
    int n = 0;
    while (p->last_child) {
      assert(n < 5);
      Node<T>* c = p->last_child;
      detach_child(c, stats_);
      shards[n++] = c;
    }
    Node<T>* fill = nullptr;
    Hole h{};
    if (!t1m) h = carve(p);
    p->rank = 0;
    if (!t1m) {
      fill = remove_below_t1(q);
      vs_->record(fill);
      splice_into_gap(h.left, h.right, h.was_last, fill, stats_);
    }
    for (int i = n; i-- > 0;) add_below_t1(shards[i]);  // ascending rank
    add_below_t1(p);
  }

  void reduce_once() {
    assert(!t2_ && vs_->reduction_possible());
    int r = vs_->first_reducible();
    Node<T>* xs[3];
    xs[0] = vs_->entry(static_cast<std::size_t>(r)).first;
    xs[1] = xs[0]->vnext;
    xs[2] = xs[1]->vnext;
    assert(xs[0]->rank == r && xs[1]->rank == r && xs[2]->rank == r);

    // Case 1: some x_i detaches without disturbing its parent's rank.
    for (Node<T>* xi : xs) {
      if (case1_eligible(xi)) {
        DetachResult<T> d = detach_for_case1(xi, stats_);
        for (int k = 0; k < d.count; ++k) add_below_t1(d.trees[k]);
        ++stats_.reductions_by_case[1];
        return;
      }
    }

    // Each x_i should now be the last or second-last child of its parent;
    // degenerate positions (one-member groups, gapped seconds, or blocked
    // interior members of collapsed demoted roots) are resolved by an
    // unconditional parent dismantle instead.
    Actor a[3];
    for (int i = 0; i < 3; ++i) {
      Node<T>* x = xs[i];
      bool last = is_last_child(x);
      bool second = !last && is_last_child(x->right);
      if (!last && !second) {  // blocked interior member
        reduce_dismantle(x);
        ++stats_.reductions_by_case[2];
        return;
      }
      if (last) {
        Node<T>* mate = x->left && x->rank - x->left->rank <= 1 ? x->left : nullptr;
        a[i] = Actor{x, mate, x->right};
        if (!mate) {
          reduce_pipeline_one(a[i]);
          ++stats_.reductions_by_case[2];
          return;
        }
      } else {
        Node<T>* s = x->right;
        if (s->rank - x->rank <= 1) {
          a[i] = Actor{x, s, s->right};
        } else {
          // gapped second-last: take the group mate below instead
          Node<T>* mate = x->left && x->rank - x->left->rank <= 1 ? x->left : nullptr;
          a[i] = Actor{x, mate, s->right};
          reduce_pipeline_one(a[i]);
          ++stats_.reductions_by_case[2];
          return;
        }
      }
      assert(a[i].s && a[i].p);
    }
    // stable sort by rank(s) descending
    for (int i = 1; i < 3; ++i)
      for (int j = i; j > 0 && a[j].s->rank > a[j - 1].s->rank; --j)
        std::swap(a[j], a[j - 1]);

    int d1 = a[0].s->rank - r;
    int d2 = a[1].s->rank - r;
    int d3 = a[2].s->rank - r;
    assert(d1 >= d2 && d2 >= d3);
    assert(d1 >= -1 && d1 <= 1 && d3 >= -1);

    if (d1 == -1) {  // (-1,-1,-1)
      reduce_join_pair(a[0], a[1], a[2], 4, /*find_min_parent=*/true);
    } else if (d1 == 1 && d2 == -1) {  // (1,-1,-1)
      if (le(a[0].p->element, a[1].p->element)) {
        if (le(a[0].p->element, a[2].p->element)) {
          reduce_join_pair(a[0], a[1], a[2], 5, /*find_min_parent=*/false);
        } else {
          reduce_replace_with_s(a[0], a[2], 5);  // 5(c) = 3(b) actions
        }
      } else {
        reduce_replace_with_s(a[0], a[1], 5);  // 5(b) = 3(b) actions
      }
    } else if (d1 == 1 && d2 == 0) {  // case 3
      if (le(a[0].p->element, a[1].p->element))
        reduce_transplant(a[0], a[1], 3);  // 3(a) = 2(a) actions
      else
        reduce_replace_with_s(a[0], a[1], 3);  // 3(b)
    } else {  // case 2: (1,1,*), (0,0,*), (0,-1,-1)
      if (le(a[0].p->element, a[1].p->element))
        reduce_transplant(a[0], a[1], 2);
      else
        reduce_transplant(a[1], a[0], 2);
    }
  }

  // Case 2(a)/3(a): detach x_a and x_b below t1, move s_b next to s_a under
  // the favored parent, dismantle B's parent and refill its place from
  // below t1.
  void reduce_transplant(Actor A, Actor B, int case_no) {
    ++stats_.reductions_by_case[case_no];
    if (A.p == B.p) {
      reduce_shared_parent(A, B);
      return;
    }
    int q_b = B.p->rank;
    bool t1b = is_child_of_t1(B.p);
    if (t1b) remove_below_t1_specific(q_b, B.p);  // intact; no refill needed

    detach_child(A.x, stats_);
    detach_child(B.x, stats_);
    detach_child(B.s, stats_);
    place_by_rank_near(A.p, A.s, B.s);

    // The transplant can leave a lower group split off as a singleton.
    Node<T>* low = A.s->rank <= B.s->rank ? A.s : B.s;
    Node<T>* repair = nullptr;
    if (low->left && singleton_group(low->left) && !is_last_child(low->left)) {
      repair = low->left;
      detach_child(repair, stats_);
    }

    Node<T>* sing = take_last_singleton(B.p);
    Node<T>* fill = nullptr;
    Hole hb{};
    if (!t1b) hb = carve(B.p);
    B.p->rank = recomputed_rank(B.p);
    if (!t1b) {
      fill = remove_below_t1(q_b);
      vs_->record(fill);
      splice_into_gap(hb.left, hb.right, hb.was_last, fill, stats_);
    }

    add_below_t1(A.x);
    add_below_t1(B.x);
    if (repair) add_below_t1(repair);
    if (sing) add_below_t1(sing);
    add_below_t1(B.p);
  }

  // Shared parent (both chosen violations are its last two members): detach
  // both, dismantle the parent once.
  void reduce_shared_parent(Actor A, Actor B) {
    Node<T>* p = A.p;
    assert(A.s == B.x && B.s == A.x);
    int q = p->rank;
    bool t1m = is_child_of_t1(p);
    if (t1m) remove_below_t1_specific(q, p);
    detach_child(A.x, stats_);
    detach_child(B.x, stats_);
    Node<T>* sing = take_last_singleton(p);
    Node<T>* fill = nullptr;
    Hole h{};
    if (!t1m) h = carve(p);
    p->rank = recomputed_rank(p);
    if (!t1m) {
      fill = remove_below_t1(q);
      vs_->record(fill);
      splice_into_gap(h.left, h.right, h.was_last, fill, stats_);
    }
    add_below_t1(A.x);
    add_below_t1(B.x);
    if (sing) add_below_t1(sing);
    add_below_t1(p);
  }

  // Case 3(b)/5(b)/5(c): rank(s_a) = r+1.  Both parents are dismantled;
  // s_a fills B's parent's place; A's place is refilled from below t1.
  void reduce_replace_with_s(Actor A, Actor B, int case_no) {
    ++stats_.reductions_by_case[case_no];
    assert(A.s->rank == A.x->rank + 1);
    int q_a = A.p->rank;
    assert(q_a == A.x->rank + 2);

    if (A.s == B.p) {
      reduce_nested(A, B, case_no);
      return;
    }
    int q_b = B.p->rank;
    bool t1a = is_child_of_t1(A.p);
    bool t1b = is_child_of_t1(B.p);
    if (t1a) remove_below_t1_specific(q_a, A.p);

    detach_child(A.x, stats_);
    detach_child(B.x, stats_);

    Node<T>* sing_b = take_last_singleton(B.p);
    detach_child(A.s, stats_);
    if (t1b) {
      c1_.swap_slot_entry(static_cast<std::size_t>(q_b), B.p, A.s);
      Hole hb = carve(B.p);
      splice_into_gap(hb.left, hb.right, hb.was_last, A.s, stats_);
      vs_->remove_any(A.s);  // now a child of t1
    } else {
      Hole hb = carve(B.p);
      splice_into_gap(hb.left, hb.right, hb.was_last, A.s, stats_);
      if (!vs_->is_recorded(A.s)) {
        // The displaced parent may itself have been violating; a record for
        // the replacement keeps heap-order soundness.
        vs_->record(A.s);
        ++stats_.case3b_guard_records;
      }
    }
    B.p->rank = recomputed_rank(B.p);

    Node<T>* sing_a = take_last_singleton(A.p);
    Node<T>* fill = nullptr;
    Hole ha{};
    if (!t1a) ha = carve(A.p);
    A.p->rank = recomputed_rank(A.p);
    if (!t1a) {
      fill = remove_below_t1(q_a);
      vs_->record(fill);
      splice_into_gap(ha.left, ha.right, ha.was_last, fill, stats_);
    }

    add_below_t1(A.x);
    add_below_t1(B.x);
    if (sing_b) add_below_t1(sing_b);
    add_below_t1(B.p);
    if (sing_a) add_below_t1(sing_a);
    add_below_t1(A.p);
  }

  // Case 3(b) when s_a is itself B's parent: A's parent loses its last two
  // children and s_a is dismantled in place of a refill.
  void reduce_nested(Actor A, Actor B, int case_no) {
    (void)case_no;
    Node<T>* sa = A.s;  // == B.p
    int q_a = A.p->rank;
    bool t1a = is_child_of_t1(A.p);
    if (t1a) remove_below_t1_specific(q_a, A.p);

    detach_child(A.x, stats_);
    detach_child(B.x, stats_);
    Node<T>* sing_b = take_last_singleton(sa);
    detach_child(sa, stats_);  // from A.p
    sa->rank = recomputed_rank(sa);

    Node<T>* sing_a = take_last_singleton(A.p);
    Node<T>* fill = nullptr;
    Hole ha{};
    if (!t1a) ha = carve(A.p);
    A.p->rank = recomputed_rank(A.p);
    if (!t1a) {
      fill = remove_below_t1(q_a);
      vs_->record(fill);
      splice_into_gap(ha.left, ha.right, ha.was_last, fill, stats_);
    }

    add_below_t1(A.x);
    add_below_t1(B.x);
    if (sing_b) add_below_t1(sing_b);
    add_below_t1(sa);
    if (sing_a) add_below_t1(sing_a);
    add_below_t1(A.p);
  }

  // Case 4 / 5(a): join x_b with x_c and s_b with s_c; the s-join fills
  // x_m's place, the x-join fills B's parent's place, and one tree from
  // below t1 fills C's parent's place.
  void reduce_join_pair(Actor M, Actor B, Actor C, int case_no, bool find_min_parent) {
    ++stats_.reductions_by_case[case_no];
    assert(B.s->rank == B.x->rank - 1 && C.s->rank == C.x->rank - 1);
    if (find_min_parent) {  // favored parent: minimum element of the three
      if (!le(M.p->element, B.p->element)) std::swap(M, B);
      if (!le(M.p->element, C.p->element)) std::swap(M, C);
    }
    assert(M.p != B.p && M.p != C.p && B.p != C.p);
    int q = B.p->rank;
    assert(C.p->rank == q);
    bool t1b = is_child_of_t1(B.p);
    bool t1c = is_child_of_t1(C.p);
    if (t1c) remove_below_t1_specific(q, C.p);

    Hole hm{M.x->left, M.x->right, is_last_child(M.x)};
    detach_child(M.x, stats_);
    detach_child(B.x, stats_);
    detach_child(C.x, stats_);
    vs_->remove_any(B.x);
    vs_->remove_any(C.x);
    Node<T>* J = join_trees(B.x, C.x);  // rank r+1

    detach_child(B.s, stats_);
    detach_child(C.s, stats_);
    Node<T>* sing_b = take_last_singleton(B.p);
    Node<T>* sing_c = take_last_singleton(C.p);
    Node<T>* Js = join_trees(B.s, C.s);  // rank r
    splice_into_gap(hm.left, hm.right, hm.was_last, Js, stats_);

    if (t1b) {
      c1_.swap_slot_entry(static_cast<std::size_t>(q), B.p, J);
      Hole hb = carve(B.p);
      splice_into_gap(hb.left, hb.right, hb.was_last, J, stats_);
      vs_->remove_any(J);  // child of t1
    } else {
      Hole hb = carve(B.p);
      splice_into_gap(hb.left, hb.right, hb.was_last, J, stats_);
      vs_->record(J);
    }
    B.p->rank = recomputed_rank(B.p);

    Node<T>* fill = nullptr;
    Hole hc{};
    if (!t1c) hc = carve(C.p);
    C.p->rank = recomputed_rank(C.p);
    if (!t1c) {
      fill = remove_below_t1(q);
      vs_->record(fill);
      splice_into_gap(hc.left, hc.right, hc.was_last, fill, stats_);
    }

    add_below_t1(M.x);
    if (sing_b) add_below_t1(sing_b);
    if (sing_c) add_below_t1(sing_c);
    add_below_t1(B.p);
    add_below_t1(C.p);
  }

  Compare comp_;
  QueueConfig cfg_;
  Node<T>* t1_ = nullptr;
  Node<T>* t2_ = nullptr;
  ExtendedRegularCounter<Node<T>*> c1_;
  ExtendedRegularCounter<Node<T>*> c2_;
  std::unique_ptr<ViolationStructure<T>> vs_;
  std::list<std::pair<std::shared_ptr<void>, std::size_t>> pile_;
  std::size_t pile_units_ = 0;
  std::size_t size_ = 0;
  OpCounters stats_;
};

}  // namespace optheap

#endif
