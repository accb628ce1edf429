#include "ipds/threads.hpp"

namespace ipds {

ThreadPool::ThreadPool(int n_threads) {
  int extra = n_threads - 1;
  for (int i = 0; i < extra; ++i) workers_.emplace_back([this, i] { worker_loop(i + 1); });
}

ThreadPool::~ThreadPool() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    stop_ = true;
  }
  cv_start_.notify_all();
  for (auto& w : workers_) w.join();
}

namespace {

void run_chunk(const ThreadPool* /*unused*/, const std::function<void(int)>& fn, int begin, int end, int chunk,
               int n_chunks) {
  int total = end - begin;
  int lo = begin + static_cast<int>(static_cast<long long>(total) * chunk / n_chunks);
  int hi = begin + static_cast<int>(static_cast<long long>(total) * (chunk + 1) / n_chunks);
  for (int i = lo; i < hi; ++i) fn(i);
}

}  // namespace

void ThreadPool::parallel_for(int begin, int end, const std::function<void(int)>& fn) {
  if (end <= begin) return;
  if (workers_.empty()) {
    for (int i = begin; i < end; ++i) fn(i);
    return;
  }
  int n_chunks = static_cast<int>(workers_.size()) + 1;
  {
    std::lock_guard<std::mutex> lock(mu_);
    job_ = Job{&fn, begin, end, n_chunks};
    pending_ = static_cast<int>(workers_.size());
    ++epoch_;
  }
  cv_start_.notify_all();
  run_chunk(this, fn, begin, end, 0, n_chunks);  // chunk 0 on the calling thread
  std::unique_lock<std::mutex> lock(mu_);
  cv_done_.wait(lock, [this] { return pending_ == 0; });
}

void ThreadPool::worker_loop(int worker_id) {
  std::uint64_t seen = 0;
  for (;;) {
    Job job;
    {
      std::unique_lock<std::mutex> lock(mu_);
      cv_start_.wait(lock, [this, seen] { return stop_ || epoch_ != seen; });
      if (stop_) return;
      seen = epoch_;
      job = job_;
    }
    run_chunk(this, *job.fn, job.begin, job.end, worker_id, job.n_chunks);
    {
      std::lock_guard<std::mutex> lock(mu_);
      --pending_;
    }
    cv_done_.notify_one();
  }
}

}  // namespace ipds
