#include <algorithm>
#include <atomic>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "svweno/parallel.hpp"

using namespace svweno;

TEST_CASE("parallel_for covers every index once") {
  for (int workers : {1, 2, 3, 7}) {
    WorkerPool pool(workers);
    CHECK(pool.size() == workers);
    for (std::size_t n : {std::size_t{1}, std::size_t{5}, std::size_t{1000}}) {
      std::vector<int> hits(n, 0);
      pool.parallel_for(n, [&](std::size_t b, std::size_t e, int) {
        for (std::size_t i = b; i < e; ++i) ++hits[i];
      });
      CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    }
  }
}

TEST_CASE("chunk boundaries depend only on n and the worker count") {
  WorkerPool pool(4);
  std::vector<std::pair<std::size_t, std::size_t>> chunks(4, {0, 0});
  pool.parallel_for(10, [&](std::size_t b, std::size_t e, int id) { chunks[static_cast<std::size_t>(id)] = {b, e}; });
  const std::vector<std::pair<std::size_t, std::size_t>> expect{{0, 2}, {2, 5}, {5, 7}, {7, 10}};
  CHECK(chunks == expect);
}

TEST_CASE("pool is reusable and n = 0 is a no-op") {
  WorkerPool pool(3);
  std::atomic<int> calls{0};
  pool.parallel_for(0, [&](std::size_t, std::size_t, int) { ++calls; });
  CHECK(calls == 0);
  long total = 0;
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<long> part(3, 0);
    pool.parallel_for(100, [&](std::size_t b, std::size_t e, int id) {
      for (std::size_t i = b; i < e; ++i) part[static_cast<std::size_t>(id)] += static_cast<long>(i);
    });
    total += std::accumulate(part.begin(), part.end(), 0L);
  }
  CHECK(total == 50L * 4950L);
}

TEST_CASE("exceptions propagate to the caller") {
  WorkerPool pool(3);
  CHECK_THROWS_AS(pool.parallel_for(9,
                                    [](std::size_t b, std::size_t, int) {
                                      if (b > 0) throw std::runtime_error("chunk failed");
                                    }),
                  std::runtime_error);
  // Still usable afterwards.
  std::atomic<int> n{0};
  pool.parallel_for(9, [&](std::size_t b, std::size_t e, int) { n += static_cast<int>(e - b); });
  CHECK(n == 9);
}

TEST_CASE("worker count must be positive") {
  CHECK_THROWS_AS(WorkerPool(0), std::invalid_argument);
  CHECK_THROWS_AS(WorkerPool(-2), std::invalid_argument);
}
