#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <type_traits>
#include <vector>

namespace volkov {

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Indices are split
/// into contiguous blocks; fn must only write to per-index storage so the
/// outcome does not depend on the worker count. The first exception thrown
/// by any worker is rethrown on the calling thread.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
    const std::size_t threads = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    const std::size_t block = (n + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
        const std::size_t lo = t * block;
        const std::size_t hi = std::min(n, lo + block);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

/// Neumaier-compensated sum in index order. Used for every reduction over
/// grid nodes so results are bit-stable regardless of how they were computed.
template <class T>
T compensated_sum(std::span<const T> values) {
    T sum{};
    T carry{};
    for (const T& v : values) {
        const T t = sum + v;
        if constexpr (std::is_floating_point_v<T>) {
            carry += (std::abs(sum) >= std::abs(v)) ? (sum - t) + v : (v - t) + sum;
        } else {
            using R = typename T::value_type;
            const R sr = sum.real(), si = sum.imag(), vr = v.real(), vi = v.imag();
            const R tr = t.real(), ti = t.imag();
            const R cr = (std::abs(sr) >= std::abs(vr)) ? (sr - tr) + vr : (vr - tr) + sr;
            const R ci = (std::abs(si) >= std::abs(vi)) ? (si - ti) + vi : (vi - ti) + si;
            carry += T(cr, ci);
        }
        sum = t;
    }
    return sum + carry;
}

template <class T>
T compensated_sum(const std::vector<T>& values) {
    return compensated_sum(std::span<const T>(values));
}

}  // namespace volkov
