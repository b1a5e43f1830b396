#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace svweno {

/// Fixed-size pool of persistent worker threads.
///
/// parallel_for splits [0, n) into one contiguous chunk per worker, so the
/// chunk boundaries depend only on n and the worker count. Callers write to
/// disjoint index ranges; no result depends on scheduling order.
class WorkerPool {
 public:
  explicit WorkerPool(int workers = 1);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  int size() const { return workers_; }

  /// Runs body(begin, end, chunk) over every non-empty chunk and blocks
  /// until all chunks finish. The first exception thrown by any chunk is
  /// rethrown on the calling thread.
  void parallel_for(std::size_t n,
                    const std::function<void(std::size_t, std::size_t, int)>& body);

 private:
  void worker_loop(int id);
  void run_chunk(int id);

  int workers_;
  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  const std::function<void(std::size_t, std::size_t, int)>* body_ = nullptr;
  std::size_t n_ = 0;
  std::size_t generation_ = 0;
  int pending_ = 0;
  bool stop_ = false;
  std::exception_ptr error_;
};

}  // namespace svweno
