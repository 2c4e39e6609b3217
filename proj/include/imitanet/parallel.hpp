#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <vector>

namespace imitanet {

/// Selects the serial reference loop or the OpenMP loop for a kernel.
enum class Execution { Serial, Parallel };

/// Worker count: IMITANET_THREADS if set and positive, else the OpenMP
/// default.
int worker_count();

/// Applies IMITANET_THREADS to the OpenMP runtime.
void configure_threads_from_env();

/// Calls body(i) for i in [0, count). Parallel uses a dynamic OpenMP
/// schedule. If bodies throw, the exception from the lowest index is
/// rethrown: Serial stops there, Parallel once the loop finishes.
void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body,
                    Execution exec);

/// out[i] = fn(i), in index order regardless of completion order.
template <typename T, typename Fn>
std::vector<T> map_indices(std::size_t count, Fn&& fn, Execution exec) {
  std::vector<T> out(count);
  for_each_index(count, [&](std::size_t i) { out[i] = fn(i); }, exec);
  return out;
}

}  // namespace imitanet
