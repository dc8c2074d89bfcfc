#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sburg {

/// Runs fn(i) for i in [0, count). threads <= 1 uses the plain serial loop,
/// which is kept as the reference path; the OpenMP path must produce
/// bit-identical results because every index writes only to its own slots and
/// reductions happen afterwards in index order.
template <typename F>
void parallel_for(std::size_t count, int threads, F&& fn) {
#ifdef _OPENMP
    if (threads > 1) {
        std::exception_ptr err;
        std::mutex err_mutex;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (long long i = 0; i < static_cast<long long>(count); ++i) {
            try {
                fn(static_cast<std::size_t>(i));
            } catch (...) {
                std::lock_guard lock(err_mutex);
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
        return;
    }
#else
    (void)threads;
#endif
    for (std::size_t i = 0; i < count; ++i) fn(i);
}

inline int hardware_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace sburg
