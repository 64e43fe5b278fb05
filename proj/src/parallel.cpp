#include "kgz/parallel.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

#include "kgz/errors.hpp"

namespace kgz {

namespace {
int g_threads = 1;
}

void set_threads(int n) {
  if (n < 1) throw ConfigError("thread count must be at least 1");
  g_threads = n;
}

int threads() { return g_threads; }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(g_threads, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace kgz
