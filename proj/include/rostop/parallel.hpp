#ifndef ROSTOP_PARALLEL_HPP
#define ROSTOP_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace rostop {

/// Worker count used when a caller passes 0: ROSTOP_THREADS if set,
/// otherwise std::thread::hardware_concurrency().
std::size_t default_thread_count();

/// Process-wide override set by the CLI's --threads flag (0 = use default).
void set_thread_count(std::size_t threads);
std::size_t thread_count();

/// Runs body(k) for k in [0, count) on up to `threads` workers (0 = thread_count()).
/// Indices are handed out in contiguous blocks. The first exception thrown by
/// any worker is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, std::size_t threads = 0);

}  // namespace rostop

#endif  // ROSTOP_PARALLEL_HPP
