#include "volkov/decay_fit.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "volkov/error.hpp"

namespace volkov {

namespace {

struct LineFit {
    double slope;
    double residual;
};

LineFit fit_line(const std::vector<double>& lx, const std::vector<double>& ly, std::size_t lo, std::size_t hi) {
    const double n = static_cast<double>(hi - lo);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw DomainError("decay fit: degenerate abscissa range");
    const double slope = sxy / sxx;
    double ss = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        const double r = ly[i] - (my + slope * (lx[i] - mx));
        ss += r * r;
    }
    return {slope, std::sqrt(ss / n)};
}

}  // namespace

DecayFit decay_order_fit(const std::vector<double>& x, const std::vector<double>& magnitude, double x_lo, double x_hi) {
    if (x.size() != magnitude.size()) throw DomainError("decay fit: sample arrays differ in length");
    if (!(x_hi > x_lo) || !(x_lo > 0.0)) throw DomainError(fmt::format("decay fit: degenerate window [{}, {}]", x_lo, x_hi));

    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double ax = std::abs(x[i]);
        if (ax < x_lo || ax > x_hi) continue;
        if (!(magnitude[i] > 0.0) || !std::isfinite(magnitude[i]))
            throw DomainError(fmt::format("decay fit: nonpositive magnitude {} at x = {}", magnitude[i], x[i]));
        pts.emplace_back(std::log(ax), std::log(magnitude[i]));
    }
    if (pts.size() < 8) throw DomainError(fmt::format("decay fit: {} samples in window, need at least 8", pts.size()));
    std::sort(pts.begin(), pts.end());

    std::vector<double> lx(pts.size()), ly(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        lx[i] = pts[i].first;
        ly[i] = pts[i].second;
    }
    if (!(lx.back() > lx.front())) throw DomainError("decay fit: degenerate abscissa range");

    DecayFit out;
    out.samples = pts.size();
    const LineFit all = fit_line(lx, ly, 0, lx.size());
    out.order = -all.slope;
    out.residual = all.residual;

    // Split at the log-midpoint so both halves span comparable ranges.
    const double mid = 0.5 * (lx.front() + lx.back());
    const auto split = static_cast<std::size_t>(std::lower_bound(lx.begin(), lx.end(), mid) - lx.begin());
    if (split >= 4 && lx.size() - split >= 4) {
        out.lower_order = -fit_line(lx, ly, 0, split).slope;
        out.upper_order = -fit_line(lx, ly, split, lx.size()).slope;
    } else {
        out.lower_order = out.upper_order = out.order;
    }
    out.superpolynomial = out.upper_order > 1.25 * std::max(out.lower_order, 0.0) + 0.5;
    return out;
}

std::vector<double> tail_envelope(const std::vector<double>& values) {
    std::vector<double> out(values.size());
    double run = 0.0;
    for (std::size_t i = values.size(); i-- > 0;) {
        run = std::max(run, values[i]);
        out[i] = run;
    }
    return out;
}

}  // namespace volkov
