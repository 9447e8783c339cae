#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace mgtd {

// Serial is the reference path; Parallel runs the same per-item kernel
// under OpenMP and must produce identical results.
enum class Execution { Serial, Parallel };

void set_thread_count(int threads);
int thread_count();

/// Runs body(i) for i in [0, n). Under Parallel the iterations are spread
/// over OpenMP threads; the first exception thrown by any iteration is
/// rethrown on the calling thread after the loop.
template <typename Body>
void for_each_index(std::size_t n, Execution exec, Body&& body) {
  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace mgtd
