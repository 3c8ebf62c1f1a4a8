// Copyright 2026 The ellipsoid-repr Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ELLIPSOID_PARALLEL_HPP
#define ELLIPSOID_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace ellipsoid {

/// Worker count: `requested` if positive, otherwise ELLIPSOID_THREADS if it
/// parses as a positive integer, otherwise the number of logical cores.
int resolve_threads(int requested);

/// Runs task(i) for i in [0, n) on up to `threads` workers. Tasks must write
/// only to their own slot. If any task throws, the exception from the lowest
/// failing index is rethrown after all workers join.
template <typename Task>
void parallel_for(std::size_t n, int threads, Task&& task) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto run = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  pool.clear();

  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace ellipsoid

#endif  // ELLIPSOID_PARALLEL_HPP
