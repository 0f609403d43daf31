#pragma once

// Quadrature back ends shared by the modules: an adaptive Gauss–Kronrod
// integrator for smooth non-oscillatory integrands and fixed-order
// Gauss–Legendre panels for oscillatory ones.

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "volkov/error.hpp"
#include "volkov/parallel.hpp"

namespace volkov::quadrature {

/// Adaptive 31-point Gauss–Kronrod (bisection depth at most 15). Tolerance
/// is relative to the integral; values below about 1e-13 are not reachable
/// by the error estimate and only exhaust the depth limit. Callers split the
/// range into pieces whose integrals are of order one.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-13);

/// Nodes and weights of the order-32 Gauss–Legendre rule on [-1, 1].
struct LegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const LegendreRule& legendre32();

/// Composite order-32 Gauss–Legendre over [a, b] with panels no wider than
/// max_width. Panel sums are accumulated in order with compensation.
template <class F>
auto integrate_panels(F&& f, double a, double b, double max_width) -> decltype(f(a)) {
    using R = decltype(f(a));
    if (!(b > a)) return R{};
    if (!(max_width > 0.0)) throw GridError("integrate_panels: panel width must be positive");
    const auto panels = static_cast<std::size_t>(std::ceil((b - a) / max_width));
    const LegendreRule& rule = legendre32();
    std::vector<R> partial(panels);
    const double h = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + h * static_cast<double>(p);
        const double mid = lo + 0.5 * h;
        R acc{};
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) acc += rule.weights[k] * f(mid + 0.5 * h * rule.nodes[k]);
        partial[p] = 0.5 * h * acc;
    }
    return compensated_sum(partial);
}

}  // namespace volkov::quadrature
