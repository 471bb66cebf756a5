#include "pcfi/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace pcfi {
namespace {

std::size_t auto_threads() {
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

std::size_t env_threads() {
  const char* env = std::getenv("PCFI_THREADS");
  if (env == nullptr || *env == '\0') return auto_threads();
  try {
    const long v = std::stol(env);
    return v <= 0 ? auto_threads() : static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    return auto_threads();
  }
}

std::atomic<std::size_t>& thread_setting() {
  static std::atomic<std::size_t> n{env_threads()};
  return n;
}

}  // namespace

std::size_t num_threads() { return thread_setting().load(); }

void set_num_threads(std::size_t n) {
  thread_setting().store(n == 0 ? env_threads() : n);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(num_threads(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace pcfi
