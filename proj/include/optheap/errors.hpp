#ifndef OPTHEAP_ERRORS_HPP
#define OPTHEAP_ERRORS_HPP

#include <stdexcept>

namespace optheap {

// Raised by find_min/delete_min on an empty queue.
struct empty_error : std::logic_error {
  empty_error() : std::logic_error("priority queue is empty") {}
};

// Raised by destroy() when elements are still present.
struct not_empty_error : std::logic_error {
  not_empty_error() : std::logic_error("priority queue is not empty") {}
};

// Contract misuse detectable at the interface (key increase, aliased meld).
struct contract_error : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace optheap

#endif
