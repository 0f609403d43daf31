#include "volkov/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace volkov::quadrature {

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    if (a == b) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, rel_tol);
}

const LegendreRule& legendre32() {
    static const LegendreRule rule = [] {
        using G = boost::math::quadrature::gauss<double, 32>;
        LegendreRule r;
        // Boost stores the non-negative half of the symmetric rule.
        const auto& x = G::abscissa();
        const auto& w = G::weights();
        for (std::size_t i = x.size(); i-- > 0;) {
            if (x[i] == 0.0) continue;
            r.nodes.push_back(-x[i]);
            r.weights.push_back(w[i]);
        }
        for (std::size_t i = 0; i < x.size(); ++i) {
            r.nodes.push_back(x[i]);
            r.weights.push_back(w[i]);
        }
        return r;
    }();
    return rule;
}

}  // namespace volkov::quadrature
