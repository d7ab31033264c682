#include "stdpg/threading.hpp"

#include <atomic>
#include <condition_variable>
#include <mutex>
#include <thread>

namespace stdpg {

namespace {

class BlockPool {
 public:
  explicit BlockPool(unsigned workers) {
    for (unsigned i = 0; i < workers; ++i) {
      threads_.emplace_back([this] { worker_loop(); });
    }
  }

  ~BlockPool() {
    {
      std::lock_guard lock(mu_);
      stop_ = true;
    }
    cv_.notify_all();
    for (auto& t : threads_) t.join();
  }

  void run(std::size_t n_blocks, const std::function<void(std::size_t)>& body) {
    {
      std::lock_guard lock(mu_);
      body_ = &body;
      end_.store(n_blocks);
      pending_ = n_blocks;
      ++generation_;
      // next_ is published last: a worker that observes the reset counter
      // also sees the body, bounds and pending count above
      next_.store(0);
    }
    cv_.notify_all();
    // The caller participates too, so a pool of k workers gives k+1 lanes.
    drain();
    std::unique_lock lock(mu_);
    done_cv_.wait(lock, [this] { return pending_ == 0; });
    body_ = nullptr;
  }

  unsigned workers() const { return static_cast<unsigned>(threads_.size()); }

 private:
  void drain() {
    while (true) {
      const std::size_t b = next_.fetch_add(1);
      if (b >= end_.load()) break;
      (*body_)(b);
      if (pending_.fetch_sub(1) == 1) {
        // take the lock so the completion cannot slip between the waiter's
        // predicate check and its block
        std::lock_guard lock(mu_);
        done_cv_.notify_all();
      }
    }
  }

  void worker_loop() {
    std::uint64_t seen = 0;
    while (true) {
      {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
        if (stop_) return;
        seen = generation_;
      }
      drain();
    }
  }

  std::mutex mu_;
  std::condition_variable cv_;
  std::condition_variable done_cv_;
  std::vector<std::thread> threads_;
  const std::function<void(std::size_t)>* body_ = nullptr;
  std::atomic<std::size_t> next_{0};
  std::atomic<std::size_t> end_{0};
  std::atomic<std::size_t> pending_{0};
  std::uint64_t generation_ = 0;
  bool stop_ = false;
};

unsigned g_threads = 0;  // 0 = not configured yet
BlockPool* g_pool = nullptr;
std::mutex g_pool_mu;

unsigned effective_threads() {
  if (g_threads == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    g_threads = hw > 0 ? hw : 1;
  }
  return g_threads;
}

}  // namespace

void set_threads(unsigned n) {
  std::lock_guard lock(g_pool_mu);
  g_threads = n > 0 ? n : 1;
  delete g_pool;
  g_pool = nullptr;
}

unsigned thread_count() {
  std::lock_guard lock(g_pool_mu);
  return effective_threads();
}

void parallel_blocks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t n_blocks = (n + kWorkBlock - 1) / kWorkBlock;
  auto run_block = [&](std::size_t b) {
    const std::size_t lo = b * kWorkBlock;
    const std::size_t hi = std::min(n, lo + kWorkBlock);
    fn(b, lo, hi);
  };

  std::unique_lock lock(g_pool_mu);
  const unsigned threads = effective_threads();
  if (threads <= 1 || n_blocks <= 1) {
    lock.unlock();
    for (std::size_t b = 0; b < n_blocks; ++b) run_block(b);
    return;
  }
  if (g_pool == nullptr) g_pool = new BlockPool(threads - 1);
  BlockPool* pool = g_pool;
  lock.unlock();

  const std::function<void(std::size_t)> body = run_block;
  pool->run(n_blocks, body);
}

double parallel_block_sum(std::size_t n,
                          const std::function<double(std::size_t, std::size_t)>& partial) {
  if (n == 0) return 0.0;
  const std::size_t n_blocks = (n + kWorkBlock - 1) / kWorkBlock;
  std::vector<double> sums(n_blocks, 0.0);
  parallel_blocks(n, [&](std::size_t b, std::size_t lo, std::size_t hi) {
    sums[b] = partial(lo, hi);
  });
  return std::accumulate(sums.begin(), sums.end(), 0.0);
}

}  // namespace stdpg
