#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace llz {

/// Work items per block. Fixed so that block boundaries, and therefore every
/// partial result, do not depend on the number of workers.
inline constexpr std::size_t kBlockSize = 256;

/// 0 means one worker per hardware thread.
inline unsigned resolve_workers(unsigned workers) noexcept {
  if (workers != 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs task(b) for every block index b in [0, n_blocks) on up to `workers`
/// threads. The first exception thrown by any task is rethrown.
template <class Task>
void for_each_block(std::size_t n_blocks, unsigned workers, Task&& task) {
  const unsigned w = std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(n_blocks, 1));
  if (w <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) task(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1, std::memory_order_relaxed);
      if (b >= n_blocks) return;
      try {
        task(b);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n_blocks);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(w - 1);
  for (unsigned i = 1; i < w; ++i) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// Calls fn(i) for i in [0, n). Results written by index are schedule-independent.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  const std::size_t n_blocks = (n + kBlockSize - 1) / kBlockSize;
  for_each_block(n_blocks, workers, [&](std::size_t b) {
    const std::size_t end = std::min(n, (b + 1) * kBlockSize);
    for (std::size_t i = b * kBlockSize; i < end; ++i) fn(i);
  });
}

/// Deterministic map-reduce. Each block folds its items into a fresh copy of
/// `init` with fold(acc, i); block results are then merged in block order.
template <class T, class Fold, class Merge>
T parallel_reduce(std::size_t n, unsigned workers, const T& init, Fold&& fold, Merge&& merge) {
  const std::size_t n_blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<std::optional<T>> partial(n_blocks);
  for_each_block(n_blocks, workers, [&](std::size_t b) {
    T acc = init;
    const std::size_t end = std::min(n, (b + 1) * kBlockSize);
    for (std::size_t i = b * kBlockSize; i < end; ++i) fold(acc, i);
    partial[b] = std::move(acc);
  });
  T total = init;
  for (auto& p : partial) merge(total, *p);
  return total;
}

}  // namespace llz
