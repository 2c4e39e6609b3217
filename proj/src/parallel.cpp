#include "imitanet/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace imitanet {

int worker_count() {
  if (const char* env = std::getenv("IMITANET_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return omp_get_max_threads();
}

void configure_threads_from_env() { omp_set_num_threads(worker_count()); }

void for_each_index(std::size_t count,
                    const std::function<void(std::size_t)>& body,
                    Execution exec) {
  if (exec == Execution::Serial || count < 2 || omp_in_parallel()) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::size_t error_index = count;
  std::mutex error_mutex;
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (static_cast<std::size_t>(i) < error_index) {
        error_index = static_cast<std::size_t>(i);
        error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace imitanet
