#include "igeo/parallel.hpp"

#include <omp.h>

namespace igeo {

int max_threads() { return omp_get_max_threads(); }

void set_threads(int n) {
  if (n >= 1) omp_set_num_threads(n);
}

namespace detail {

void parallel_for(std::size_t n, void (*body)(void*, std::size_t), void* ctx) {
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (long long i = 0; i < count; ++i) body(ctx, static_cast<std::size_t>(i));
}

}  // namespace detail
}  // namespace igeo
