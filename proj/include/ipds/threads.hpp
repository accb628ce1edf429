#pragma once

#include <condition_variable>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ipds {

// Minimal persistent pool for per-node parallelism. Work is partitioned by
// index into fixed contiguous chunks, so the result layout (and therefore the
// run output) does not depend on the worker count.
class ThreadPool {
 public:
  explicit ThreadPool(int n_threads);
  ~ThreadPool();

  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  // Runs fn(i) for i in [begin, end); blocks until every index is done.
  void parallel_for(int begin, int end, const std::function<void(int)>& fn);

  int size() const { return static_cast<int>(workers_.size()) + 1; }

 private:
  void worker_loop(int worker_id);

  struct Job {
    const std::function<void(int)>* fn = nullptr;
    int begin = 0;
    int end = 0;
    int n_chunks = 1;
  };

  std::vector<std::thread> workers_;
  std::mutex mu_;
  std::condition_variable cv_start_;
  std::condition_variable cv_done_;
  Job job_;
  std::uint64_t epoch_ = 0;
  int pending_ = 0;
  bool stop_ = false;
};

}  // namespace ipds
