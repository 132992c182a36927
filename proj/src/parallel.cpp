#include "concentra/parallel.hpp"

#include <cstdlib>

namespace concentra {

namespace {

int default_threads() {
  if (const char* env = std::getenv("CONCENTRA_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

int g_threads = -1;

}  // namespace

int worker_threads() {
  if (g_threads < 1) g_threads = default_threads();
  return g_threads;
}

void set_worker_threads(int threads) { g_threads = threads >= 1 ? threads : 1; }

}  // namespace concentra
