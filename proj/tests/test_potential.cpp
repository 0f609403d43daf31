#include <doctest.h>

#include <cmath>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "support.hpp"
#include "volkov/error.hpp"
#include "volkov/potential.hpp"

using namespace volkov;
using testing_support::uniform;

namespace {

// Independent oracle: tanh-sinh quadrature of the integrand on unit
// sub-intervals.
double oracle_phase(const PlaneWavePotential& pot, const PhaseQuery& q, double a, double b) {
    boost::math::quadrature::tanh_sinh<double> ts;
    const double lo = std::min(a, b), hi = std::max(a, b);
    const int n = std::max(1, static_cast<int>(std::ceil(hi - lo)));
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x0 = lo + (hi - lo) * i / n, x1 = lo + (hi - lo) * (i + 1) / n;
        total += ts.integrate([&](double s) { return phase_integrand(pot, q, s); }, x0, x1, 1e-14);
    }
    return b >= a ? total : -total;
}

}  // namespace

TEST_CASE("phase integrand examples") {
    const auto zero = PlaneWavePotential::zero();
    CHECK(phase_integrand(zero, {0, 0, 1}, 3.7) == doctest::Approx(1.0).epsilon(1e-15));
    const auto h = PlaneWavePotential::harmonic(0.2, 1.0);
    CHECK(phase_integrand(h, {0.3, 0, 1}, 0.0) == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(phase_integrand(h, {0.3, 0, 1}, M_PI / 2) == doctest::Approx(1.09).epsilon(1e-15));
}

TEST_CASE("harmonic field and derivative") {
    const auto h = PlaneWavePotential::harmonic(0.2, 1.5);
    for (double s : {-3.0, 0.0, 0.4, 2.2}) {
        CHECK(h.field(s).a2 == doctest::Approx(0.2 * std::cos(1.5 * s)));
        CHECK(h.field(s).a3 == 0.0);
        const double fd = (h.field(s + 1e-5).a2 - h.field(s - 1e-5).a2) / 2e-5;
        CHECK(h.field_derivative(s).a2 == doctest::Approx(fd).epsilon(1e-8));
    }
    CHECK(h.closed_form_phase());
    CHECK_THROWS_AS(PlaneWavePotential::harmonic(0.2, 0.0), DomainError);
}

TEST_CASE("pulse field derivative matches finite differences") {
    const auto p = PlaneWavePotential::pulse(0.4, 2.0, 1.5);
    for (double s : {-4.0, -1.0, 0.0, 0.7, 3.0}) {
        const double fd = (p.field(s + 1e-5).a2 - p.field(s - 1e-5).a2) / 2e-5;
        CHECK(p.field_derivative(s).a2 == doctest::Approx(fd).epsilon(1e-8).scale(1e-3));
    }
    CHECK_THROWS_AS(PlaneWavePotential::pulse(0.4, 2.0, 0.0), DomainError);
}

TEST_CASE("phase examples") {
    const auto zero = PlaneWavePotential::zero();
    CHECK(phase(zero, {0, 0, 1}, 0.0, 4.5) == doctest::Approx(4.5).epsilon(1e-15));
    CHECK(zeta(zero, {0, 0, 1}, 3.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(zeta(zero, {0, 0, 1}, 0.0) == 0.0);

    const auto h = PlaneWavePotential::harmonic(0.2, 1.0);
    const PhaseQuery q(0.3, 0, 1);
    const double expected = (0.09 + 0.02 + 1.0) * 2.0 * M_PI;
    CHECK(std::abs(phase(h, q, 0.0, 2.0 * M_PI) - expected) <= 1e-13 * expected);
    CHECK(std::abs(oracle_phase(h, q, 0.0, 2.0 * M_PI) - expected) <= 1e-12 * expected);
    CHECK(phase(h, q, 1.3, 1.3) == 0.0);
}

TEST_CASE("phase query rejects nonpositive mass") {
    CHECK_THROWS_AS(PhaseQuery(0, 0, 0.0), DomainError);
    CHECK_THROWS_AS(PhaseQuery(0, 0, -1.0), DomainError);
}

TEST_CASE("property: harmonic closed form agrees with quadrature") {
    for (int trial = 0; trial < 200; ++trial) {
        const double lam = uniform(-1, 1), om = uniform(0.2, 3) * (uniform(0, 1) < 0.5 ? -1 : 1);
        const auto h = PlaneWavePotential::harmonic(lam, om);
        const PhaseQuery q(uniform(-1, 1), uniform(-1, 1), uniform(0.3, 2));
        const double a = uniform(-10, 10), b = uniform(-10, 10);
        const double ref = oracle_phase(h, q, a, b);
        CHECK(std::abs(phase(h, q, a, b) - ref) <= 1e-10 * std::abs(ref));
    }
}

TEST_CASE("property: pulse phase agrees with an independent quadrature") {
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = PlaneWavePotential::pulse(uniform(-1, 1), uniform(0.5, 3), uniform(0.5, 3));
        const PhaseQuery q(uniform(-1, 1), uniform(-1, 1), uniform(0.3, 2));
        const double a = uniform(-8, 8), b = uniform(-8, 8);
        const double ref = oracle_phase(p, q, a, b);
        CHECK(std::abs(phase(p, q, a, b) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
    }
}

TEST_CASE("property: phase additivity, monotonicity and integrand bound") {
    const std::vector<PlaneWavePotential> pots = {PlaneWavePotential::zero(), PlaneWavePotential::harmonic(0.5, 1.3),
                                                  PlaneWavePotential::pulse(0.7, 2.0, 1.0)};
    for (const auto& pot : pots) {
        for (int trial = 0; trial < 60; ++trial) {
            const PhaseQuery q(uniform(-1, 1), uniform(-1, 1), uniform(0.3, 2));
            const double a = uniform(-10, 10), b = uniform(-10, 10), c = uniform(-10, 10);
            const double lhs = phase(pot, q, a, b) + phase(pot, q, b, c);
            const double rhs = phase(pot, q, a, c);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));

            const double s = uniform(-10, 10), hstep = uniform(1e-3, 2);
            CHECK(zeta(pot, q, s + hstep) - zeta(pot, q, s) >= q.m * q.m * hstep * (1 - 1e-12));
        }
        const PhaseQuery q(0.4, -0.2, 0.7);
        for (int i = 0; i <= 2000; ++i) CHECK(phase_integrand(pot, q, -20.0 + 0.02 * i) >= q.m * q.m);
    }
}

TEST_CASE("cubic spline interpolates and errs outside the knots") {
    std::vector<double> x, y;
    for (int i = 0; i <= 10; ++i) {
        x.push_back(0.3 * i);
        y.push_back(2.0 - 1.5 * x.back());
    }
    CubicSpline sp(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(sp.value(x[i]) == doctest::Approx(y[i]).epsilon(1e-14));
    // Linear data is reproduced exactly by the natural spline.
    CHECK(sp.value(1.05) == doctest::Approx(2.0 - 1.5 * 1.05).epsilon(1e-14));
    CHECK(sp.derivative(2.22) == doctest::Approx(-1.5).epsilon(1e-13));
    CHECK_THROWS_AS(sp.value(-0.01), DomainError);
    CHECK_THROWS_AS(sp.value(3.01), DomainError);
    CHECK_THROWS_AS(CubicSpline({0.0, 1.0, 1.0}, {0.0, 0.0, 0.0}), DomainError);
}

TEST_CASE("spline error shrinks at fourth order in the interior") {
    auto max_err = [](int n) {
        std::vector<double> x, y;
        for (int i = 0; i <= n; ++i) {
            x.push_back(-2.0 + 4.0 * i / n);
            y.push_back(std::sin(x.back()));
        }
        CubicSpline sp(x, y);
        double e = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double t = -1.0 + 2.0 * i / 200.0;
            e = std::max(e, std::abs(sp.value(t) - std::sin(t)));
        }
        return e;
    };
    const double ratio = max_err(40) / max_err(80);
    CHECK(ratio > 12.0);
}

TEST_CASE("tabulated potential: phase converges to the sampled profile's phase") {
    std::vector<double> s, a2;
    for (int i = 0; i <= 800; ++i) {
        s.push_back(-10.0 + 20.0 * i / 800.0);
        a2.push_back(0.2 * std::cos(s.back()));
    }
    const auto tab = PlaneWavePotential::tabulated(s, a2);
    const auto harm = PlaneWavePotential::harmonic(0.2, 1.0);
    const PhaseQuery q(0.3, 0.1, 1.0);
    CHECK(!tab.closed_form_phase());
    const double ref = phase(harm, q, -3.0, 7.0);
    CHECK(std::abs(phase(tab, q, -3.0, 7.0) - ref) <= 1e-8 * std::abs(ref));
    CHECK_THROWS_AS(phase(tab, q, 0.0, 11.0), DomainError);
    CHECK_THROWS_AS(phase_integrand(tab, q, -10.5), DomainError);
    CHECK_THROWS_AS(PlaneWavePotential::tabulated(s, a2, {}, 1), DomainError);
}

TEST_CASE("tabulated CSV loading") {
    std::stringstream good;
    good.precision(17);
    good << "s,a2,a3\n";
    for (int i = 0; i <= 20; ++i) good << (0.5 * i) << "," << std::sin(0.5 * i) << "," << 0.1 << "\n";
    const auto pot = load_tabulated_csv(good);
    CHECK(pot.kind() == PlaneWavePotential::Kind::tabulated);
    CHECK(pot.field(2.0).a2 == doctest::Approx(std::sin(2.0)).epsilon(1e-12));
    CHECK(pot.field(2.3).a3 == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(pot.domain().second == 10.0);

    std::stringstream two_col("s,a2\n0,0\n1,1\n2,0\n3,1\n");
    CHECK(load_tabulated_csv(two_col).field(1.5).a3 == 0.0);

    std::stringstream decreasing("s,a2\n0,0\n1,1\n0.5,0\n3,1\n");
    CHECK_THROWS_AS(load_tabulated_csv(decreasing), ConfigError);
    std::stringstream bad_cols("s\n0\n1\n2\n3\n");
    CHECK_THROWS_AS(load_tabulated_csv(bad_cols), ConfigError);
    std::stringstream not_number("s,a2\n0,0\n1,x\n2,0\n3,1\n");
    CHECK_THROWS_AS(load_tabulated_csv(not_number), ConfigError);
    std::stringstream empty("");
    CHECK_THROWS_AS(load_tabulated_csv(empty), ConfigError);
}
