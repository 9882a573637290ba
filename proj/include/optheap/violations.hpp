#ifndef OPTHEAP_VIOLATIONS_HPP
#define OPTHEAP_VIOLATIONS_HPP

#include <cassert>
#include <cstddef>
#include <utility>

#include "node.hpp"
#include "rarray.hpp"

namespace optheap {

// The active-violation bookkeeping of one queue: a resizable per-rank array
// whose entry r points at the first active violation of rank r (all active
// violations of a rank are consecutive in the active list), a reducible-rank
// list threaded through the entries that hold three or more violations, and
// the inactive list for violations whose rank the array cannot index yet.
template <class T>
class ViolationStructure {
 public:
  struct Entry {
    Node<T>* first;
    int count;
    int red_prev;
    int red_next;
    bool in_red;
  };

  ViolationStructure()
      : atag_(tag_acquire(new ListTag{this, 1, 0})),
        itag_(tag_acquire(new ListTag{this, 2, 0})) {}

  ~ViolationStructure() { retire_tags(); }

  ViolationStructure(const ViolationStructure&) = delete;
  ViolationStructure& operator=(const ViolationStructure&) = delete;

  std::size_t size() const { return array_.size(); }
  std::size_t array_capacity() const { return array_.capacity(); }
  long active_count() const { return active_count_; }
  long inactive_count() const { return inactive_count_; }
  Node<T>* active_head() const { return active_head_; }
  Node<T>* inactive_head() const { return inactive_head_; }
  const Entry& entry(std::size_t r) const { return array_[r]; }

  bool is_recorded(const Node<T>* x) const { return x->vtag != nullptr; }
  bool is_active(const Node<T>* x) const { return x->vtag == atag_; }
  bool is_inactive(const Node<T>* x) const { return x->vtag == itag_; }

  // Grow by up to k entries, never past max_rank + 1.
  void extend(int k, int max_rank, OpCounters& st) {
    std::size_t target = static_cast<std::size_t>(max_rank) + 1;
    if (array_.size() + k < target) target = array_.size() + k;
    ensure_size(target, st);
  }

  void ensure_size(std::size_t target, OpCounters& st) {
    while (array_.size() < target) {
      array_.grow();
      array_[array_.size() - 1] = Entry{nullptr, 0, -1, -1, false};
      ++st.structural_edits;
    }
  }

  // Record x as violating; x must not be recorded already.
  void record(Node<T>* x) {
    assert(x->vtag == nullptr);
    std::size_t r = static_cast<std::size_t>(x->rank);
    if (r < array_.size()) {
      Entry& e = array_[r];
      if (e.first) {
        x->vnext = e.first;
        x->vprev = e.first->vprev;
        if (x->vprev)
          x->vprev->vnext = x;
        else
          active_head_ = x;
        e.first->vprev = x;
      } else {
        x->vnext = active_head_;
        x->vprev = nullptr;
        if (active_head_)
          active_head_->vprev = x;
        else
          active_tail_ = x;
        active_head_ = x;
      }
      e.first = x;
      ++e.count;
      if (e.count == 3) red_push(static_cast<int>(r));
      x->vtag = tag_acquire(atag_);
      ++active_count_;
    } else {
      x->vnext = inactive_head_;
      x->vprev = nullptr;
      if (inactive_head_)
        inactive_head_->vprev = x;
      else
        inactive_tail_ = x;
      inactive_head_ = x;
      x->vtag = tag_acquire(itag_);
      ++inactive_count_;
    }
  }

  // Remove x from whatever violation list it is in.  Returns false when x
  // was not recorded.  Active bookkeeping is keyed by x's current rank.
  bool remove_any(Node<T>* x) {
    ListTag* t = x->vtag;
    if (!t) return false;
    if (t == atag_)
      remove_active(x, x->rank);
    else if (t == itag_)
      remove_inactive(x);
    else {
      assert(t->owner == nullptr);  // a retired list from a melded queue
      remove_personal(x);
    }
    return true;
  }

  // Active record whose rank is about to change / has changed: take it out
  // under the old rank's books and file it again.
  void re_slot(Node<T>* x, int old_rank) {
    assert(is_active(x));
    remove_active(x, old_rank);
    record(x);
  }

  // Node swap support: if entry r points at `from`, point it at `to`.
  void replace_first(int r, Node<T>* from, Node<T>* to) {
    if (r < 0 || static_cast<std::size_t>(r) >= array_.size()) return;
    if (array_[static_cast<std::size_t>(r)].first == from)
      array_[static_cast<std::size_t>(r)].first = to;
  }

  bool reduction_possible() const { return reducible_head_ != -1; }
  int first_reducible() const { return reducible_head_; }

  // Move every inactive violation into the array; it must be large enough.
  void activate_inactive() {
    while (inactive_head_) {
      Node<T>* x = inactive_head_;
      remove_inactive(x);
      assert(static_cast<std::size_t>(x->rank) < array_.size());
      record(x);
    }
  }

  // Meld support: turn this structure's records into one plain list the old
  // root can guard.  Retires both tags in O(1); the records themselves are
  // not visited.  Returns the head (the caller installs the guard link).
  Node<T>* convert_to_personal() {
    Node<T>* head = active_head_;
    if (head) {
      if (inactive_head_) {
        active_tail_->vnext = inactive_head_;
        inactive_head_->vprev = active_tail_;
      }
    } else {
      head = inactive_head_;
    }
    retire_tags();
    atag_ = tag_acquire(new ListTag{this, 1, 0});
    itag_ = tag_acquire(new ListTag{this, 2, 0});
    active_head_ = active_tail_ = inactive_head_ = inactive_tail_ = nullptr;
    active_count_ = inactive_count_ = 0;
    reducible_head_ = -1;
    return head;
  }

  template <class Sink>
  void dismiss_array_into(Sink&& sink) {
    array_.dismiss_into(sink);
  }

 private:
  void remove_active(Node<T>* x, int rank_key) {
    Entry& e = array_[static_cast<std::size_t>(rank_key)];
    assert(e.count >= 1);
    if (e.first == x) e.first = e.count > 1 ? x->vnext : nullptr;
    if (x->vprev)
      x->vprev->vnext = x->vnext;
    else
      active_head_ = x->vnext;
    if (x->vnext)
      x->vnext->vprev = x->vprev;
    else
      active_tail_ = x->vprev;
    --e.count;
    if (e.count == 2 && e.in_red) red_remove(rank_key);
    clear_record(x);
    --active_count_;
  }

  void remove_inactive(Node<T>* x) {
    if (x->vprev)
      x->vprev->vnext = x->vnext;
    else
      inactive_head_ = x->vnext;
    if (x->vnext)
      x->vnext->vprev = x->vprev;
    else
      inactive_tail_ = x->vprev;
    clear_record(x);
    --inactive_count_;
  }

  void remove_personal(Node<T>* x) {
    assert(x->vprev != nullptr);  // the head's vprev is its guard
    if (x->vprev->vhead == x)
      x->vprev->vhead = x->vnext;
    else
      x->vprev->vnext = x->vnext;
    if (x->vnext) x->vnext->vprev = x->vprev;
    clear_record(x);
  }

  void clear_record(Node<T>* x) {
    tag_release(x->vtag);
    x->vtag = nullptr;
    x->vprev = x->vnext = nullptr;
  }

  void red_push(int r) {
    Entry& e = array_[static_cast<std::size_t>(r)];
    assert(!e.in_red);
    e.in_red = true;
    e.red_prev = -1;
    e.red_next = reducible_head_;
    if (reducible_head_ != -1) array_[static_cast<std::size_t>(reducible_head_)].red_prev = r;
    reducible_head_ = r;
  }

  void red_remove(int r) {
    Entry& e = array_[static_cast<std::size_t>(r)];
    assert(e.in_red);
    if (e.red_prev != -1)
      array_[static_cast<std::size_t>(e.red_prev)].red_next = e.red_next;
    else
      reducible_head_ = e.red_next;
    if (e.red_next != -1) array_[static_cast<std::size_t>(e.red_next)].red_prev = e.red_prev;
    e.in_red = false;
    e.red_prev = e.red_next = -1;
  }

  void retire_tags() {
    if (atag_) {
      atag_->owner = nullptr;
      tag_release(atag_);
      atag_ = nullptr;
    }
    if (itag_) {
      itag_->owner = nullptr;
      tag_release(itag_);
      itag_ = nullptr;
    }
  }

  ResizableArray<Entry> array_;
  Node<T>* active_head_ = nullptr;
  Node<T>* active_tail_ = nullptr;
  Node<T>* inactive_head_ = nullptr;
  Node<T>* inactive_tail_ = nullptr;
  int reducible_head_ = -1;
  long active_count_ = 0;
  long inactive_count_ = 0;
  ListTag* atag_;
  ListTag* itag_;
};

}  // namespace optheap

#endif
