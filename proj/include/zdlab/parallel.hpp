#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace zdlab::exec {

enum class Policy { Serial, Parallel };

/// Number of worker threads the Parallel policy will use. Honors the
/// ZDLAB_THREADS environment variable (applied once, on first call);
/// returns 1 in builds without OpenMP.
inline int max_threads() {
#ifdef _OPENMP
    static const int n = [] {
        if (const char* env = std::getenv("ZDLAB_THREADS")) {
            const int requested = std::atoi(env);
            if (requested > 0) omp_set_num_threads(requested);
        }
        return omp_get_max_threads();
    }();
    return n;
#else
    return 1;
#endif
}

/// Runs fn(i) for i in [0, n). With Policy::Parallel the iterations are
/// distributed over OpenMP threads; fn must not throw and each iteration
/// must only write state owned by its own index, so results are identical
/// to the serial path bit for bit.
template <typename Fn>
void for_index(std::size_t n, Policy policy, Fn&& fn) {
#ifdef _OPENMP
    if (policy == Policy::Parallel && n > 1 && max_threads() > 1) {
        const std::int64_t count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
        return;
    }
#else
    (void)policy;
#endif
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace zdlab::exec
