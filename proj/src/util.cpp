#include "kg/util.hpp"

#include <atomic>
#include <thread>

namespace kg {

namespace {
int g_threads = 1;
}

void set_thread_count(int n) { g_threads = n < 1 ? 1 : n; }
int thread_count() { return g_threads; }

void parallel_for(int n, const std::function<void(int)>& body) {
  const int workers = std::min(g_threads, n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next(0);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace kg
