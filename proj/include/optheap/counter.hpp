#ifndef OPTHEAP_COUNTER_HPP
#define OPTHEAP_COUNTER_HPP

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "rarray.hpp"
#include "stats.hpp"

namespace optheap {

// Result of splitting a rank-(r+1) tree.  `first` always has rank r; the
// remainder keeps the split node's identity; a singleton group member may
// come off as a third tree.  Ranks are reported so the counter can classify
// the outcome.
template <class Tree>
struct SplitParts {
  Tree first{};
  Tree remainder{};
  int remainder_rank = 0;
  Tree extra{};  // detached singleton member, if any
  int extra_rank = 0;
  bool has_extra = false;
};

// Trees an operation could not place into a slot (irregular split
// outcomes).  The caller must add them below t1 right after the operation.
template <class Tree>
struct DeferredTrees {
  std::pair<Tree, int> items[4];
  int count = 0;
  void push(Tree t, int rank) {
    assert(count < 4);
    items[count++] = {t, rank};
  }
};

// Callback set for pure numeral-system use: no trees, splits always yield
// two halves of the expected rank.
struct PureTree {
  bool operator==(const PureTree&) const = default;
};

struct PureCallbacks {
  static constexpr bool structural = false;
  PureTree join(PureTree, PureTree) { return {}; }
  SplitParts<PureTree> split(PureTree, int rank) {
    SplitParts<PureTree> p;
    p.remainder_rank = rank - 1;  // two trees of rank r
    return p;
  }
  void attach(PureTree, int, PureTree, bool) {}
  void attach_sole(PureTree, int) {}
  void detach(PureTree, int) {}
};

// Extended regular binary counter: digit string over {0,1,2,3},
// least-significant first, where every 3 is preceded by a 0 or 1 through 2s
// and every 0 by a 2 or 3 through 1s.  Each digit slot carries the trees of
// that rank plus a forward pointer to its block's distinguishing digit.
// Increment/decrement at an arbitrary position cost O(1) digit changes.
template <class Tree>
class ExtendedRegularCounter {
 public:
  struct Slot {
    std::uint8_t digit;
    std::uint32_t forward;
    Tree trees[4];
  };

  ExtendedRegularCounter() = default;
  ExtendedRegularCounter(ExtendedRegularCounter&&) noexcept = default;
  ExtendedRegularCounter& operator=(ExtendedRegularCounter&&) noexcept = default;

  std::size_t length() const { return len_; }
  int digit(std::size_t i) const { return i < len_ ? slots_[i].digit : 0; }
  std::size_t forward(std::size_t i) const { return slots_[i].forward; }

  void set_stats(OpCounters* s) { stats_ = s; }

  std::uint64_t value() const {
    std::uint64_t v = 0;
    assert(len_ <= 62);
    for (std::size_t i = 0; i < len_; ++i)
      v += std::uint64_t(slots_[i].digit) << i;
    return v;
  }

  std::vector<int> digits() const {
    std::vector<int> d(len_);
    for (std::size_t i = 0; i < len_; ++i) d[i] = slots_[i].digit;
    return d;
  }

  bool is_regular() const {
    if (len_ == 0) return true;
    if (slots_[len_ - 1].digit == 0) return false;
    for (std::size_t k = 0; k < len_; ++k) {
      int d = slots_[k].digit;
      if (d == 3) {
        bool ok = false;
        for (std::size_t j = k; j-- > 0;) {
          int b = slots_[j].digit;
          if (b == 2) continue;
          ok = (b == 0 || b == 1);
          break;
        }
        if (!ok) return false;
      } else if (d == 0) {
        bool ok = false;
        for (std::size_t j = k; j-- > 0;) {
          int b = slots_[j].digit;
          if (b == 1) continue;
          ok = (b == 2 || b == 3);
          break;
        }
        if (!ok) return false;
      }
    }
    return true;
  }

  // Test/scripting backdoor: install a literal digit/forward state.  Only
  // meaningful in pure mode.
  static ExtendedRegularCounter from_digits(const std::vector<int>& digits,
                                            const std::vector<std::uint32_t>& forwards = {}) {
    ExtendedRegularCounter c;
    for (std::size_t i = 0; i < digits.size(); ++i) {
      c.append_slot();
      assert(digits[i] >= 0 && digits[i] <= 3);
      c.slots_[i].digit = static_cast<std::uint8_t>(digits[i]);
      c.slots_[i].forward = i < forwards.size() ? forwards[i] : 0;
    }
    return c;
  }

  // --- slot access for the structure layer ---

  int tree_count(std::size_t i) const { return slots_[i].digit; }
  Tree slot_tree(std::size_t i, int k) const { return slots_[i].trees[k]; }

  bool slot_contains(std::size_t i, Tree t) const {
    if (i >= len_) return false;
    const Slot& s = slots_[i];
    for (int k = 0; k < s.digit; ++k)
      if (s.trees[k] == t) return true;
    return false;
  }

  // Replace a stored tree handle in place (node swap / hole fill).  Digit
  // value is untouched; the caller does the matching list surgery.
  void swap_slot_entry(std::size_t i, Tree from, Tree to) {
    assert(i < len_);
    Slot& s = slots_[i];
    for (int k = 0; k < s.digit; ++k)
      if (s.trees[k] == from) {
        s.trees[k] = to;
        return;
      }
    assert(false && "swap_slot_entry: tree not present");
  }

  // --- fixes ---

  // d_j = 3: rewrite to 1 and carry, joining two rank-j trees.
  template <class CB>
  void fix_carry(std::size_t j, CB& cb) {
    assert(j <= len_ - 1 && slots_[j].digit == 3);
    carry_at(j, cb);
    if (stats_) ++stats_->fixes;
  }

  // d_j = 0: rewrite by borrowing from position j+1, splitting one tree.
  template <class CB>
  void fix_borrow(std::size_t j, CB& cb, DeferredTrees<Tree>& deferred) {
    assert(j < len_ - 1 && slots_[j].digit == 0);
    borrow_at(j, cb, deferred, Tree{}, false);
    if (stats_) ++stats_->fixes;
  }

  // --- arithmetic ---

  // Add one tree of rank i (value += 2^i).  i == length() appends a digit.
  template <class CB>
  void increment(std::size_t i, Tree t, CB& cb) {
    assert(i <= len_);
    if (i == len_) append_slot();
    if (slots_[i].digit == 3) fix_carry(i, cb);
    std::size_t j = slots_[i].forward;
    // Genuine member forwards always point upward; anything else is stale
    // and skipping the fix is harmless.
    if (j > i && j <= len_ - 1 && slots_[j].digit == 3) fix_carry(j, cb);
    slot_add(i, t, cb);
    if (stats_) ++stats_->digit_writes;
    if (slots_[i].digit == 3) fix_carry(i, cb);
    if (stats_) ++stats_->increments;
  }

  // Remove one tree of rank i (value -= 2^i).  Returns the detached tree;
  // `deferred` receives trees the caller must re-add below t1.
  template <class CB>
  Tree decrement(std::size_t i, CB& cb, DeferredTrees<Tree>& deferred) {
    return decrement_impl(i, cb, deferred, Tree{}, false);
  }

  // As decrement, but removes exactly `target` from slot i.
  template <class CB>
  Tree decrement_specific(std::size_t i, Tree target, CB& cb, DeferredTrees<Tree>& deferred) {
    assert(slot_contains(i, target));
    return decrement_impl(i, cb, deferred, target, true);
  }

  template <class Sink>
  void dismiss_into(Sink&& sink) {
    slots_.dismiss_into(sink);
    len_ = 0;
  }

  std::size_t capacity() const { return slots_.capacity(); }

 private:
  template <class CB>
  Tree decrement_impl(std::size_t i, CB& cb, DeferredTrees<Tree>& deferred,
                      Tree target, bool specific) {
    assert(len_ >= 1 && i <= len_ - 1);
    bool fixed_here = false;
    if (slots_[i].digit == 0) {
      assert(!specific);
      fix_borrow(i, cb, deferred);
      fixed_here = true;
    }
    std::size_t j = slots_[i].forward;
    // Guards beyond the pseudo-code's bounds check: a genuine member forward
    // points upward to its block's 0, which always has a nonzero digit just
    // below it.  Stale forwards failing these tests would only trigger
    // unnecessary (and here, unsafe) fixes.
    if (j > i && j < len_ - 1 && slots_[j].digit == 0 && slots_[j - 1].digit >= 1) {
      borrow_at(j, cb, deferred, target, specific);
      if (stats_) ++stats_->fixes;
    }
    Tree res = slot_remove(i, specific ? slot_index_of(i, target) : 0, cb);
    if (stats_) ++stats_->digit_writes;
    // If the first fix already ran, a zero here is the original, still
    // guarded one; the two end fixes are mutually exclusive.
    if (!fixed_here && i < len_ - 1 && slots_[i].digit == 0) fix_borrow(i, cb, deferred);
    // Trailing zeros are truncated eagerly; a decrement sheds at most two.
    int shed = 0;
    while (len_ > 0 && slots_[len_ - 1].digit == 0) {
      slots_.shrink();
      --len_;
      ++shed;
    }
    assert(shed <= 2);
    (void)shed;
    if (stats_) ++stats_->decrements;
    return res;
  }

  template <class CB>
  void carry_at(std::size_t j, CB& cb) {
    Slot& s = slots_[j];
    assert(s.digit >= 3);  // 3 normally; 4 transiently after an irregular split
    Tree a = take_at(j, 0, cb);
    Tree b = take_at(j, 0, cb);
    Tree w = cb.join(a, b);
    if (j + 1 == len_) append_slot();
    place(j + 1, w, cb);
    if (stats_) stats_->digit_writes += 2;
    set_forward(j);
  }

  // Core of fix-borrow.  Splits one tree from slot j+1 and classifies the
  // outcome; the partner lands in a slot, anything else is deferred.
  template <class CB>
  void borrow_at(std::size_t j, CB& cb, DeferredTrees<Tree>& deferred,
                 Tree protect, bool protecting) {
    assert(j + 1 <= len_ - 1 && slots_[j + 1].digit >= 1);
    int vic = 0;
    if (protecting) {
      while (vic < slots_[j + 1].digit && slots_[j + 1].trees[vic] == protect) ++vic;
      assert(vic < slots_[j + 1].digit);
    }
    Tree victim = take_at(j + 1, vic, cb);
    SplitParts<Tree> p = cb.split(victim, static_cast<int>(j) + 1);
    if (stats_) stats_->digit_writes += 2;

    place(j, p.first, cb);

    // Candidates for the slot partner: the remainder, then the singleton.
    // Preference order r, r+1, r-1 among whatever fits.
    const int r = static_cast<int>(j);
    int cand_rank[2];
    Tree cand_tree[2];
    int ncand = 0;
    cand_tree[ncand] = p.remainder;
    cand_rank[ncand++] = p.remainder_rank;
    if (p.has_extra) {
      cand_tree[ncand] = p.extra;
      cand_rank[ncand++] = p.extra_rank;
    }
    int partner = -1;
    for (int want : {r, r + 1, r - 1}) {
      for (int k = 0; k < ncand && partner < 0; ++k)
        if (cand_rank[k] == want) partner = k;
      if (partner >= 0) break;
    }
    assert(partner >= 0 && "split outcome outside {r-1, r, r+1}");

    if (cand_rank[partner] == r) {
      place(j, cand_tree[partner], cb);
    } else if (cand_rank[partner] == r + 1) {
      place(j + 1, cand_tree[partner], cb);
    } else {
      assert(j >= 1);
      place(j - 1, cand_tree[partner], cb);
      if (stats_) ++stats_->digit_writes;
      if (slots_[j - 1].digit >= 3) carry_at(j - 1, cb);  // extra join
    }
    for (int k = 0; k < ncand; ++k)
      if (k != partner) deferred.push(cand_tree[k], cand_rank[k]);

    set_forward(j);
  }

  // Both block categories start new two-digit blocks against a 0 or a 3;
  // otherwise the member inherits the following digit's forward.
  void set_forward(std::size_t j) {
    if (j + 1 <= len_ - 1) {
      int d = slots_[j + 1].digit;
      slots_[j].forward =
          (d == 0 || d == 3) ? static_cast<std::uint32_t>(j + 1) : slots_[j + 1].forward;
    }
  }

  void append_slot() {
    slots_.grow();
    slots_[len_].digit = 0;
    slots_[len_].forward = 0;
    ++len_;
  }

  int slot_index_of(std::size_t i, Tree t) const {
    const Slot& s = slots_[i];
    for (int k = 0; k < s.digit; ++k)
      if (s.trees[k] == t) return k;
    assert(false && "tree not in slot");
    return 0;
  }

  // Remove the k-th stored tree of slot i (list detach included).
  template <class CB>
  Tree take_at(std::size_t i, int k, CB& cb) {
    Slot& s = slots_[i];
    assert(k < s.digit);
    Tree t = s.trees[k];
    for (int m = k; m + 1 < s.digit; ++m) s.trees[m] = s.trees[m + 1];
    --s.digit;
    cb.detach(t, static_cast<int>(i));
    return t;
  }

  template <class CB>
  Tree slot_remove(std::size_t i, int k, CB& cb) {
    return take_at(i, k, cb);
  }

  // Store a tree into slot i and splice it into the owner's child list at
  // the matching position.  A regular string never has two adjacent zeros,
  // and an operation introduces at most one transient zero, so a nonzero
  // anchor slot is always within distance two.
  template <class CB>
  void place(std::size_t i, Tree t, CB& cb) {
    if constexpr (CB::structural) {
      if (slots_[i].digit > 0) {
        cb.attach(t, static_cast<int>(i), slots_[i].trees[slots_[i].digit - 1],
                  /*before=*/false);
      } else {
        std::size_t lo = i;
        while (lo > 0 && slots_[lo - 1].digit == 0) {
          --lo;
          assert(i - lo <= 2);
        }
        std::size_t hi = i + 1;
        while (hi < len_ && slots_[hi].digit == 0) {
          ++hi;
          assert(hi <= i + 3);
        }
        if (lo > 0) {
          Slot& b = slots_[lo - 1];
          cb.attach(t, static_cast<int>(i), b.trees[b.digit - 1], /*before=*/false);
        } else if (hi < len_) {
          cb.attach(t, static_cast<int>(i), slots_[hi].trees[0], /*before=*/true);
        } else {
          cb.attach_sole(t, static_cast<int>(i));
        }
      }
    }
    Slot& s = slots_[i];
    assert(s.digit < 4);
    s.trees[s.digit] = t;
    ++s.digit;
  }

  template <class CB>
  void slot_add(std::size_t i, Tree t, CB& cb) {
    place(i, t, cb);
  }

  ResizableArray<Slot> slots_;
  std::size_t len_ = 0;
  OpCounters* stats_ = nullptr;
};

using PureCounter = ExtendedRegularCounter<PureTree>;

}  // namespace optheap

#endif
