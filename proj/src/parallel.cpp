#include "hkmc/parallel.hpp"

namespace hkmc {

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_thread_count(unsigned n) { g_threads.store(n); }

unsigned thread_count() {
  const unsigned n = g_threads.load();
  if (n) return n;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace hkmc
