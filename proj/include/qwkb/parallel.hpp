#pragma once

#include <cstdlib>
#include <functional>
#include <numeric>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace qwkb {

/// True when OpenMP kernels are enabled (compiled in and not disabled via the
/// QWKB_SERIAL environment variable). The serial path is the reference
/// implementation; parallel results must match it bit-for-bit, which holds
/// because each index writes its own slot and reductions run in index order.
inline bool parallel_enabled() {
#if defined(_OPENMP)
    static const bool disabled = [] {
        const char* e = std::getenv("QWKB_SERIAL");
        return e && e[0] != '0';
    }();
    return !disabled;
#else
    return false;
#endif
}

/// Run fn(i) for i in [0, n). Each iteration must only touch its own output slot.
template <typename Fn>
void parallel_for(long n, const Fn& fn) {
    if (parallel_enabled()) {
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic, 1)
        for (long i = 0; i < n; ++i) fn(i);
        return;
#endif
    }
    for (long i = 0; i < n; ++i) fn(i);
}

/// Map i -> double over [0, n) and sum in fixed index order (deterministic
/// regardless of thread count).
template <typename Fn>
double parallel_map_sum(long n, const Fn& fn) {
    std::vector<double> slots(static_cast<std::size_t>(n), 0.0);
    parallel_for(n, [&](long i) { slots[static_cast<std::size_t>(i)] = fn(i); });
    double acc = 0.0;
    for (double v : slots) acc += v;
    return acc;
}

} // namespace qwkb
