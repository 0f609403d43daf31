#pragma once

#include <random>

#include "volkov/clifford.hpp"

namespace testing_support {

using volkov::cplx;
using volkov::Spinor;

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(20240611);
    return gen;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

inline cplx complex_uniform() { return {uniform(-1, 1), uniform(-1, 1)}; }

inline Spinor random_spinor() {
    Spinor v;
    for (int i = 0; i < 4; ++i) v[i] = complex_uniform();
    return v;
}

/// Nonzero u drawn from ±[lo, hi].
inline double random_u(double lo = 0.2, double hi = 2.0) {
    const double mag = uniform(lo, hi);
    return uniform(0, 1) < 0.5 ? -mag : mag;
}

}  // namespace testing_support
