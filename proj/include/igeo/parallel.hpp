#pragma once

// Point-parallel kernels. Every kernel in the library has two execution
// paths: a plain serial loop (the reference) and an OpenMP loop. Results are
// written by index, so both paths produce identical output.

#include <cstddef>
#include <exception>
#include <vector>

namespace igeo {

enum class Execution { Serial, Parallel };

/// Number of threads the parallel path will use.
int max_threads();
void set_threads(int n);

namespace detail {
void parallel_for(std::size_t n, void (*body)(void*, std::size_t), void* ctx);
}

/// Calls fn(i) for i in [0, n). If any call throws, the exception from the
/// lowest index is rethrown after the loop.
template <class Fn>
void for_each_index(std::size_t n, Execution exec, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  auto guarded = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < n; ++i) guarded(i);
  } else {
    using G = decltype(guarded);
    detail::parallel_for(
        n, [](void* ctx, std::size_t i) { (*static_cast<G*>(ctx))(i); }, &guarded);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace igeo
