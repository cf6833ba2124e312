#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>

namespace rbb {

// Sets the OpenMP team size; n <= 0 restores the runtime default.
void set_thread_count(int n);
int thread_count();

// Runs body(i) for i in [0, count) across the OpenMP team. Each index must
// write only to its own output slot, which keeps results independent of the
// thread count. If any index throws, the exception of the smallest failing
// index is rethrown after the loop.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  std::exception_ptr error;
  std::size_t failed_at = std::numeric_limits<std::size_t>::max();
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(rbb_parallel_for_error)
      {
        if (static_cast<std::size_t>(i) < failed_at) {
          failed_at = static_cast<std::size_t>(i);
          error = std::current_exception();
        }
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace rbb
