#include "rostop/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace rostop {

namespace {

std::atomic<std::size_t> g_threads{0};

}  // namespace

std::size_t default_thread_count()
{
  if (const char* env = std::getenv("ROSTOP_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) { return static_cast<std::size_t>(v); }
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void set_thread_count(std::size_t threads) { g_threads = threads; }

std::size_t thread_count()
{
  const std::size_t t = g_threads;
  return t > 0 ? t : default_thread_count();
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, std::size_t threads)
{
  if (count == 0) { return; }
  const std::size_t workers = std::min(count, threads > 0 ? threads : thread_count());
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) { body(k); }
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t block = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * block, hi = std::min(count, lo + block);
    if (lo >= hi) { break; }
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t k = lo; k < hi; ++k) { body(k); }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) { first_error = std::current_exception(); }
      }
    });
  }
  for (auto& t : pool) { t.join(); }
  if (first_error) { std::rethrow_exception(first_error); }
}

}  // namespace rostop
