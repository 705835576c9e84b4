#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#include <omp.h>

namespace wbs2 {

/// Serial reference for for_each_index.
template <class Fn>
void serial_for_each_index(std::size_t n, Fn&& fn) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

/// Runs fn(i) for i in [0, n) on up to `jobs` OpenMP threads. Each call
/// must only write state owned by index i, so the outcome is independent of
/// scheduling. The exception thrown by the lowest failing index is rethrown.
template <class Fn>
void for_each_index(std::size_t n, int jobs, Fn&& fn) {
    if (jobs <= 1 || n <= 1 || omp_in_parallel()) {
        serial_for_each_index(n, fn);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<long long>(n);
#pragma omp parallel for num_threads(jobs) schedule(dynamic)
    for (long long i = 0; i < count; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

/// Number of threads to use when the caller asks for "all" (jobs <= 0).
inline int resolve_jobs(int jobs) { return jobs > 0 ? jobs : omp_get_max_threads(); }

}  // namespace wbs2
