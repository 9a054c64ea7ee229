#include "iscat/parallel.hpp"

#include <tbb/global_control.h>
#include <tbb/parallel_for.h>

#include <cstdlib>
#include <memory>
#include <mutex>
#include <string>

namespace iscat {

namespace {
std::mutex g_mu;
std::unique_ptr<tbb::global_control> g_control;
}  // namespace

void set_threads(int n) {
  std::lock_guard<std::mutex> lock(g_mu);
  g_control.reset();
  if (n > 0) g_control = std::make_unique<tbb::global_control>(tbb::global_control::max_allowed_parallelism, n);
}

int max_threads() {
  return static_cast<int>(tbb::global_control::active_value(tbb::global_control::max_allowed_parallelism));
}

int resolve_threads(int requested) {
  if (const char* env = std::getenv("ISCAT_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  return requested;
}

void parallel_for(int n, const std::function<void(int)>& f) {
  if (n <= 0) return;
  if (n == 1 || max_threads() == 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  tbb::parallel_for(0, n, [&](int i) { f(i); });
}

}  // namespace iscat
