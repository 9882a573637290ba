#ifndef OPTHEAP_RARRAY_HPP
#define OPTHEAP_RARRAY_HPP

#include <cassert>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <utility>

namespace optheap {

// Resizable array built from two memory segments X and Y with incremental
// copying.  grow, shrink and access all run in worst-case constant time; at
// most one copy (doubling or halving) is in flight, and it always completes
// before the next one must start.  Unlike a textbook version, access is
// bounds-checked and reports a range error.
//
// T must be default-constructible and movable; slots reserved by grow() are
// uninitialized until assigned through operator[].
template <class T>
class ResizableArray {
 public:
  ResizableArray() : x_(alloc(1)), xcap_(1) {}

  ResizableArray(ResizableArray&&) noexcept = default;
  ResizableArray& operator=(ResizableArray&&) noexcept = default;
  ResizableArray(const ResizableArray&) = delete;
  ResizableArray& operator=(const ResizableArray&) = delete;

  std::size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }

  // Total allocated slots across both segments.
  std::size_t capacity() const { return xcap_ + ycap_; }

  T& operator[](std::size_t i) {
    if (i >= n_) throw std::out_of_range("ResizableArray: index out of range");
    return (y_ && i >= front_) ? y_[i] : x_[i];
  }
  const T& operator[](std::size_t i) const {
    if (i >= n_) throw std::out_of_range("ResizableArray: index out of range");
    return (y_ && i >= front_) ? y_[i] : x_[i];
  }

  // Reserve one more slot at the end.  The new slot's content is
  // unspecified; assign it before reading.
  void grow() {
    work_ = 0;
    ++n_;
    if (!y_) {
      if (n_ - 1 < xcap_) return;  // slack left in X
      ycap_ = 2 * xcap_;
      y_ = alloc(ycap_);
      ++work_;
      front_ = n_ - 1;  // X still holds [0, front_)
    }
    advance_copy(1);
  }

  // Drop the last slot.
  void shrink() {
    if (n_ == 0) throw std::out_of_range("ResizableArray: shrink of empty array");
    work_ = 0;
    --n_;
    if (!y_) {
      if (xcap_ < 4 || n_ != xcap_ / 4) return;
      ycap_ = xcap_ / 2;
      y_ = alloc(ycap_);
      ++work_;
      front_ = n_;
    }
    advance_copy(2);
  }

  // Work units (allocations + object copies + renames) spent by the most
  // recent grow/shrink call.  Always a small constant.
  int last_call_work() const { return work_; }

  // Hand both buffers to a reclamation sink as (pointer, slot count) pairs
  // and reset to the pristine single-slot state.  Constant time.
  template <class Sink>
  void dismiss_into(Sink&& sink) {
    sink(std::shared_ptr<void>(std::move(x_)), xcap_);
    if (y_) sink(std::shared_ptr<void>(std::move(y_)), ycap_);
    x_ = alloc(1);
    y_.reset();
    xcap_ = 1;
    ycap_ = 0;
    n_ = 0;
    front_ = 0;
  }

 private:
  static std::unique_ptr<T[]> alloc(std::size_t c) {
    return std::make_unique_for_overwrite<T[]>(c);
  }

  void advance_copy(int k) {
    if (!y_) return;
    for (; k > 0 && front_ > 0; --k) {
      y_[front_ - 1] = std::move(x_[front_ - 1]);
      --front_;
      ++work_;
    }
    if (front_ == 0) {
      x_ = std::move(y_);
      xcap_ = ycap_;
      y_.reset();
      ycap_ = 0;
      ++work_;
    }
  }

  std::unique_ptr<T[]> x_;
  std::unique_ptr<T[]> y_;
  std::size_t xcap_ = 0;
  std::size_t ycap_ = 0;
  std::size_t n_ = 0;      // logical size
  std::size_t front_ = 0;  // X holds [0, front_) while Y exists
  int work_ = 0;
};

}  // namespace optheap

#endif
