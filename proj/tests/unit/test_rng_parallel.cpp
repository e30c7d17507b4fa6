#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "weylscope/parallel.hpp"
#include "weylscope/rng.hpp"

using namespace weylscope;

TEST_CASE("counter streams are pure functions of seed and index") {
  CounterRng a(99), b(99), c(100);
  auto s1 = a.stream(7), s2 = b.stream(7), s3 = c.stream(7), s4 = a.stream(8);
  for (int i = 0; i < 10; ++i) {
    auto x = s1.next_u64();
    CHECK(x == s2.next_u64());
    CHECK(x != s3.next_u64());
    CHECK(x != s4.next_u64());
  }
}

TEST_CASE("uniform draws lie in (0,1) with mean near one half") {
  auto s = CounterRng(1).stream(0);
  double sum = 0.0;
  const int M = 100000;
  for (int i = 0; i < M; ++i) {
    double u = s.uniform();
    CHECK_UNARY(u > 0.0 && u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / M - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / M));
}

TEST_CASE("normal draws have unit variance") {
  auto s = CounterRng(2).stream(0);
  double m = 0.0, v = 0.0;
  const int M = 100000;
  for (int i = 0; i < M; ++i) {
    double x = s.normal();
    m += x;
    v += x * x;
  }
  m /= M;
  v = v / M - m * m;
  CHECK(std::abs(m) < 4.0 / std::sqrt(M));
  CHECK(std::abs(v - 1.0) < 4.0 * std::sqrt(2.0 / M));
}

TEST_CASE("parallel_for visits each index once and is thread-count independent") {
  const int saved = thread_count();
  for (int t : {1, 3}) {
    set_thread_count(t);
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
  set_thread_count(saved);
}

TEST_CASE("parallel_for propagates exceptions") {
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                    if (i == 5) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}
