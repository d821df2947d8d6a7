#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace odds {

/// Execution policy for the data-parallel kernels. `serial` is the reference
/// path kept for testing and benchmarking; both paths produce bit-identical
/// results for any thread count.
enum class Exec { serial, parallel };

namespace par {

/// Fixed chunk count, independent of the thread count, so that floating-point
/// accumulation order never depends on scheduling.
inline std::size_t chunk_count(std::uint64_t n) {
    const std::uint64_t target = 1024;
    return static_cast<std::size_t>(n < target ? (n == 0 ? 1 : n) : target);
}

/// Deterministic sum of term(i) for i in [0,n): per-chunk serial partial sums
/// folded in chunk order. Bitwise identical for serial/parallel and any
/// OMP_NUM_THREADS.
template <class F>
double chunked_sum(std::uint64_t n, F&& term, Exec exec = Exec::parallel) {
    if (n == 0) return 0.0;
    const std::size_t chunks = chunk_count(n);
    std::vector<double> partial(chunks, 0.0);
    const std::uint64_t per = n / chunks, extra = n % chunks;
    auto body = [&](std::size_t c) {
        std::uint64_t lo = c * per + (c < extra ? c : extra);
        std::uint64_t hi = lo + per + (c < extra ? 1 : 0);
        double s = 0.0;
        for (std::uint64_t i = lo; i < hi; ++i) s += term(i);
        partial[c] = s;
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c)
            body(static_cast<std::size_t>(c));
    } else {
        for (std::size_t c = 0; c < chunks; ++c) body(c);
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

/// Deterministic count of indices satisfying pred (integer sums are exact in
/// any order; chunking kept for symmetry with chunked_sum).
template <class F>
std::uint64_t chunked_count(std::uint64_t n, F&& pred, Exec exec = Exec::parallel) {
    if (n == 0) return 0;
    const std::size_t chunks = chunk_count(n);
    std::vector<std::uint64_t> partial(chunks, 0);
    const std::uint64_t per = n / chunks, extra = n % chunks;
    auto body = [&](std::size_t c) {
        std::uint64_t lo = c * per + (c < extra ? c : extra);
        std::uint64_t hi = lo + per + (c < extra ? 1 : 0);
        std::uint64_t s = 0;
        for (std::uint64_t i = lo; i < hi; ++i) s += pred(i) ? 1 : 0;
        partial[c] = s;
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c)
            body(static_cast<std::size_t>(c));
    } else {
        for (std::size_t c = 0; c < chunks; ++c) body(c);
    }
    std::uint64_t total = 0;
    for (auto s : partial) total += s;
    return total;
}

/// Fill out[i] = f(i) for i in [0,n); each slot written exactly once, so the
/// result never depends on scheduling.
template <class F>
void fill_indexed(std::size_t n, double* out, F&& f, Exec exec = Exec::parallel) {
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i)
            out[i] = f(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    }
}

/// Worker count used by the parallel path (1 when OpenMP is absent).
inline int worker_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_worker_count(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace par
}  // namespace odds
