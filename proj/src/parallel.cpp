#include "efp/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace efp {

namespace {
std::size_t g_max_threads = 0;  // 0 = not set yet
}

void set_max_threads(std::size_t n) { g_max_threads = n == 0 ? 1 : n; }

std::size_t max_threads() {
  if (g_max_threads == 0) {
    unsigned hw = std::thread::hardware_concurrency();
    g_max_threads = hw == 0 ? 1 : hw;
  }
  return g_max_threads;
}

void parallel_chunks(std::size_t count, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (count == 0) return;
  if (chunk_size == 0) chunk_size = 1;
  const std::size_t num_chunks = (count + chunk_size - 1) / chunk_size;
  const std::size_t workers = std::min(max_threads(), num_chunks);

  if (workers <= 1) {
    for (std::size_t c = 0; c < num_chunks; ++c) {
      const std::size_t begin = c * chunk_size;
      fn(c, begin, std::min(begin + chunk_size, count));
    }
    return;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&]() {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= num_chunks) return;
      const std::size_t begin = c * chunk_size;
      try {
        fn(c, begin, std::min(begin + chunk_size, count));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  std::size_t grain) {
  parallel_chunks(count, grain,
                  [&](std::size_t, std::size_t begin, std::size_t end) {
                    for (std::size_t i = begin; i < end; ++i) fn(i);
                  });
}

}  // namespace efp
