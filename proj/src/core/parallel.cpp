#include "parallel.hpp"

#include <cstdlib>
#include <string>

namespace coiso {

namespace {
std::atomic<int> g_override{0};
}

void set_thread_override(int n) { g_override = n; }

int thread_count() {
  if (int o = g_override.load(); o > 0) return o;
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("COISO_THREADS")) {
    try {
      int cap = std::stoi(env);
      if (cap > 0) return std::min(cap, hw);
    } catch (...) {
      // unparsable value: ignore the cap
    }
  }
  return hw;
}

}  // namespace coiso
