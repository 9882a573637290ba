#include <random>
#include <vector>

#include "doctest.h"
#include "optheap/rarray.hpp"

using optheap::ResizableArray;

TEST_CASE("fresh array has capacity 1 and size 0") {
  ResizableArray<int> a;
  CHECK(a.size() == 0);
  CHECK(a.capacity() == 1);
  CHECK_THROWS_AS(a[0], std::out_of_range);
}

TEST_CASE("grow into slack does not copy") {
  ResizableArray<int> a;
  a.grow();
  a[0] = 7;
  CHECK(a.size() == 1);
  CHECK(a.capacity() == 1);
  // (cap 1, size 1) -> doubling copy created, advanced and finished
  a.grow();
  a[1] = 8;
  CHECK(a.size() == 2);
  CHECK(a.capacity() == 2);
  CHECK(a[0] == 7);
  CHECK(a[1] == 8);
}

TEST_CASE("grow with slack is a pure size bump") {
  ResizableArray<int> a;
  for (int i = 0; i < 4; ++i) {
    a.grow();
    a[a.size() - 1] = i;
  }
  CHECK(a.capacity() == 4);  // doubling copies completed
  a.shrink();
  CHECK(a.capacity() == 4);
  a.grow();  // back into slack: no copy, no allocation
  a[3] = 3;
  CHECK(a.capacity() == 4);
  CHECK(a.last_call_work() == 0);
  for (int i = 0; i < 4; ++i) CHECK(a[std::size_t(i)] == i);
}

TEST_CASE("shrink of empty array is a range error") {
  ResizableArray<int> a;
  CHECK_THROWS_AS(a.shrink(), std::out_of_range);
}

TEST_CASE("halving copy starts at a quarter and finishes in time") {
  ResizableArray<int> a;
  for (int i = 0; i < 8; ++i) {
    a.grow();
    a[a.size() - 1] = i;
  }
  CHECK(a.capacity() == 8);
  for (int i = 0; i < 5; ++i) a.shrink();
  CHECK(a.size() == 3);
  CHECK(a.capacity() == 8);  // still above the quarter trigger
  a.shrink();                // size 2 == 8/4: halving copy runs
  CHECK(a.size() == 2);
  CHECK(a.capacity() == 4);
  CHECK(a[0] == 0);
  CHECK(a[1] == 1);
}

TEST_CASE("differential fuzz against std::vector with work and space bounds") {
  std::mt19937_64 rng(42);
  ResizableArray<long> a;
  std::vector<long> ref;
  for (int step = 0; step < 100000; ++step) {
    bool growing = ref.empty() || (rng() % 100) < 55;
    if (growing) {
      a.grow();
      long v = long(rng());
      a[a.size() - 1] = v;
      ref.push_back(v);
    } else {
      a.shrink();
      ref.pop_back();
    }
    CHECK(a.last_call_work() <= 4);
    REQUIRE(a.size() == ref.size());
    REQUIRE(a.capacity() <= 6 * ref.size() + 4);
    if (!ref.empty()) {
      std::size_t i = rng() % ref.size();
      REQUIRE(a[i] == ref[i]);
    }
    if (step % 4096 == 0) {
      for (std::size_t i = 0; i < ref.size(); ++i) REQUIRE(a[i] == ref[i]);
    }
  }
}

TEST_CASE("dismiss hands buffers to the sink and resets") {
  ResizableArray<int> a;
  for (int i = 0; i < 10; ++i) {
    a.grow();
    a[a.size() - 1] = i;
  }
  std::size_t units = 0;
  int buffers = 0;
  a.dismiss_into([&](std::shared_ptr<void> p, std::size_t u) {
    CHECK(p != nullptr);
    units += u;
    ++buffers;
  });
  CHECK(buffers >= 1);
  CHECK(units >= 10);
  CHECK(a.size() == 0);
  CHECK(a.capacity() == 1);
}
