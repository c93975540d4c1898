#include "wg/parallel.hpp"

#include <atomic>
#include <thread>

namespace wg {

namespace {
std::atomic<int> g_max_threads{0}; // 0 = not set yet, use hardware
}

int hardware_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

int max_threads() {
  int n = g_max_threads.load(std::memory_order_relaxed);
  return n > 0 ? n : hardware_threads();
}

void set_max_threads(int n) {
  g_max_threads.store(n > 0 ? n : 0, std::memory_order_relaxed);
}

} // namespace wg
