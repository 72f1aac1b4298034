#include "apw/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace apw {

namespace {
std::atomic<int> g_override{0};
}

int thread_cap() {
  if (int o = g_override.load(); o > 0) return o;
  if (const char* env = std::getenv("APERIODIC_WANNIER_THREADS")) {
    try {
      int v = std::stoi(env);
      if (v > 0) return v;
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_thread_cap(int cap) { g_override.store(cap > 0 ? cap : 0); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(n, std::size_t(thread_cap()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace apw
