// exec.hpp — execution policy for the grid kernels
//
// Every sweep kernel exists in two flavors behind one entry point: a plain
// serial loop (the reference used by the tests) and an OpenMP parallel-for
// over independent grid points. Results are required to be bit-identical:
// each index is computed by the same code path on immutable inputs, so the
// schedule cannot change the arithmetic.

#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kpo {

enum class Exec { serial, parallel };

// Apply fn(i) for i in [0, n). fn must not touch state shared across
// indices other than its own output slot.
template <typename Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& fn) {
#ifdef _OPENMP
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            fn(static_cast<std::size_t>(i));
        return;
    }
#else
    (void)exec;
#endif
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

} // namespace kpo
