#include <doctest.h>

#include <cmath>
#include <sstream>

#include "support.hpp"
#include "volkov/error.hpp"
#include "volkov/projector.hpp"

using namespace volkov;
using testing_support::random_spinor;
using testing_support::uniform;

namespace {

const double c3 = std::pow(2 * M_PI, 3);
const double c4 = std::pow(2 * M_PI, 4);

double max_abs(const SpinMatrix& m) { return m.cwiseAbs().maxCoeff(); }

PlaneWavePotential random_potential(int which) {
    switch (which % 3) {
        case 0: return PlaneWavePotential::zero();
        case 1: return PlaneWavePotential::harmonic(uniform(-0.5, 0.5), uniform(0.5, 2.0));
        default: return PlaneWavePotential::pulse(uniform(-0.5, 0.5), uniform(0.5, 2.0), uniform(0.5, 3.0));
    }
}

ModeParams random_negative_mode() { return {uniform(-1, 1), uniform(-1, 1), -uniform(0.2, 2.0), uniform(0.3, 2.0)}; }

// Fourth-order central difference (Richardson on two step sizes).
template <class F>
SpinMatrix richardson_derivative(F&& f, double s, double h) {
    auto d = [&](double hh) -> SpinMatrix { return (f(s + hh) - f(s - hh)) / (2 * hh); };
    return (4.0 * d(h / 2) - d(h)) / 3.0;
}

}  // namespace

TEST_CASE("retarded and advanced supports") {
    const ModeParams mode(0.3, 0.0, -0.5, 1.0);
    const auto zero = PlaneWavePotential::zero();
    const auto ret = green_ab(mode, zero, 0.5, 1.0, GreenKind::retarded);
    CHECK(ret.a == cplx(0.0));
    CHECK(max_abs(ret.b) == 0.0);
    const auto adv = green_ab(mode, zero, 1.5, 1.0, GreenKind::advanced);
    CHECK(adv.a == cplx(0.0));
    CHECK(max_abs(adv.b) == 0.0);

    const auto just_after = green_ab(mode, zero, 1.0 + 1e-13, 1.0, GreenKind::retarded);
    CHECK(std::abs(just_after.a - cplx(0, -1) / c3) <= 1e-12 / c3);
    CHECK(ret.has_delta_term);
    CHECK(ret.delta_coefficient == doctest::Approx(2.0 / (c3 * 2.0 * -0.5)));
}

TEST_CASE("jump of the retarded a across the diagonal") {
    for (int trial = 0; trial < 50; ++trial) {
        const auto pot = random_potential(trial);
        const ModeParams mode(uniform(-1, 1), uniform(-1, 1), testing_support::random_u(), uniform(0.3, 2));
        const double st = uniform(-3, 3);
        const double d = 1e-12;
        for (GreenKind kind : {GreenKind::retarded, GreenKind::advanced}) {
            const cplx jump = green_ab(mode, pot, st + d, st, kind).a - green_ab(mode, pot, st - d, st, kind).a;
            CHECK(std::abs(jump - cplx(0, -1) / c3) <= 1e-10 / c3);
        }
    }
}

TEST_CASE("property: Green's coefficients solve their ODEs off the diagonal") {
    for (int trial = 0; trial < 120; ++trial) {
        const auto pot = random_potential(trial);
        const ModeParams mode(uniform(-1, 1), uniform(-1, 1), testing_support::random_u(), uniform(0.3, 2));
        const double st = uniform(-3, 3);
        const GreenKind kind = trial % 2 ? GreenKind::retarded : GreenKind::advanced;
        const double s = kind == GreenKind::retarded ? st + uniform(0.1, 5) : st - uniform(0.1, 5);
        const double rate = phase_integrand(pot, mode.phase_query(), s);

        auto a_of = [&](double x) { return green_ab(mode, pot, x, st, kind).a; };
        auto da = [&](double hh) { return (a_of(s + hh) - a_of(s - hh)) / (2 * hh); };
        const cplx a_ds = (4.0 * da(1e-3) - da(2e-3)) / 3.0;
        const cplx a = a_of(s);
        CHECK(std::abs(4.0 * I * mode.u * a_ds - rate * a) <= 1e-10 / c3 * std::max(1.0, rate));

        auto b_of = [&](double x) -> SpinMatrix { return green_ab(mode, pot, x, st, kind).b; };
        const SpinMatrix b_ds = richardson_derivative(b_of, s, 2e-3);
        const SpinMatrix b = b_of(s);
        CHECK(max_abs(4.0 * I * mode.u * b_ds - rate * b) <= 1e-10 / c3 * std::max(1.0, rate) * (1 + max_abs(b) * c3));
    }
}

TEST_CASE("causal fundamental solution: continuity, scaling and the Dirac system") {
    const auto& ops = lightcone_operators();
    for (int trial = 0; trial < 120; ++trial) {
        const auto pot = random_potential(trial);
        const ModeParams mode(uniform(-1, 1), uniform(-1, 1), testing_support::random_u(), uniform(0.3, 2));
        const double st = uniform(-3, 3);

        const SpinMatrix below = causal_fundamental_momentum(mode, pot, st - 1e-13, st);
        const SpinMatrix at = causal_fundamental_momentum(mode, pot, st, st);
        const SpinMatrix above = causal_fundamental_momentum(mode, pot, st + 1e-13, st);
        CHECK(max_abs(above - below) <= 1e-12 * max_abs(at));

        const double s = st + uniform(-4, 4);
        const SpinMatrix k = causal_fundamental_momentum(mode, pot, s, st);
        const SpinMatrix diff =
            green_kernel(mode, pot, s, st, GreenKind::advanced) - green_kernel(mode, pot, s, st, GreenKind::retarded);
        CHECK(max_abs(2.0 * M_PI * I * k - diff) <= 1e-14 * max_abs(diff));

        // (2i N+ ∂s + 2u N- + 𝒜(s) - m) k = 0, column by column.
        auto k_of = [&](double x) -> SpinMatrix { return causal_fundamental_momentum(mode, pot, x, st); };
        const SpinMatrix k_ds = richardson_derivative(k_of, s, 2e-3);
        const TransverseField a = pot.field(s);
        const SpinMatrix op_k = 2.0 * I * (ops.n_plus * k_ds) + 2.0 * mode.u * (ops.n_minus * k) +
                                transverse_slash(mode.k2, mode.k3, a.a2, a.a3) * k - mode.m * k;
        const double scale = max_abs(k) * (1.0 + phase_integrand(pot, mode.phase_query(), s) / std::abs(mode.u));
        CHECK(max_abs(op_k) <= 1e-10 * scale);
    }
}

TEST_CASE("signature sign") {
    CHECK(signature_sign(-0.5) == -1);
    CHECK(signature_sign(3.0) == 1);
    CHECK_THROWS_AS(signature_sign(0.0), DomainError);
    for (double u : {-2.0, -0.1, 0.1, 2.0}) {
        const double chi = (1.0 - signature_sign(u)) / 2.0;
        CHECK(chi * chi == chi);
    }
}

TEST_CASE("fermionic projector kernel") {
    const auto h = PlaneWavePotential::harmonic(0.2, 1.0);
    const ModeParams mode(0.3, 0.0, -0.5, 1.0);
    CHECK(fp_scalar_a(mode, h, 1.7, 1.7) == cplx(1.0 / c4, 0.0));
    CHECK_THROWS_AS(fp_kernel_momentum(ModeParams(0.3, 0, 0.5, 1.0), h, 0, 0), DomainError);

    for (int trial = 0; trial < 300; ++trial) {
        const auto pot = random_potential(trial);
        const ModeParams m = random_negative_mode();
        const double s = uniform(-5, 5), st = uniform(-5, 5);
        const SpinMatrix p = fp_kernel_momentum(m, pot, s, st);
        const SpinMatrix k = causal_fundamental_momentum(m, pot, s, st);
        CHECK(max_abs(p + static_cast<double>(signature_sign(m.u)) * k) <= 1e-12 * max_abs(p));
        CHECK(max_abs(spin_adjoint(p) - fp_kernel_momentum(m, pot, st, s)) <= 1e-12 * max_abs(p));
    }

    // Zero potential: a single frequency v = (k2² + k3² + m²) / 4u.
    const auto zero = PlaneWavePotential::zero();
    const ModeParams z(0.3, -0.4, -0.7, 1.1);
    const double v = (0.09 + 0.16 + 1.21) / (4 * -0.7);
    const SpinMatrix base = fp_kernel_momentum(z, zero, 0.0, 0.0);
    for (double s : {-3.0, 0.5, 4.0}) {
        const SpinMatrix p = fp_kernel_momentum(z, zero, s, 1.0);
        CHECK(max_abs(p - std::exp(-I * v * (s - 1.0)) * base) <= 1e-13 * max_abs(base));
    }
}

TEST_CASE("kernel CSV export") {
    const ModeParams mode(0.3, 0.0, -0.5, 1.0);
    std::vector<KernelSample> samples = {sample_fp_kernel(mode, PlaneWavePotential::zero(), 0.0, 1.0)};
    std::ostringstream out;
    write_kernel_csv(out, samples);
    const std::string text = out.str();
    CHECK(text.rfind("u,k2,k3,s,s_tilde,re_00,im_00,re_01", 0) == 0);
    std::istringstream in(text);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(std::count(header.begin(), header.end(), ',') == 36);
    CHECK(std::count(row.begin(), row.end(), ',') == 36);
}

TEST_CASE("Richardson extrapolation to zero") {
    const std::vector<double> eps = {0.1, 0.05, 0.025};
    std::vector<cplx> vals;
    for (double e : eps) vals.push_back(cplx(2.0 - 3.0 * e + 7.0 * e * e, 1.0 + e));
    const cplx r = extrapolate_to_zero(eps, vals);
    CHECK(std::abs(r - cplx(2.0, 1.0)) <= 1e-13);
    // The classic weights for halving steps: (8 f(ε/4) - 6 f(ε/2) + f(ε)) / 3.
    const cplx classic = (8.0 * vals[2] - 6.0 * vals[1] + vals[0]) / 3.0;
    CHECK(std::abs(r - classic) <= 1e-13);
}

namespace {

std::vector<PacketNode> oscillation_nodes(const Axis& u, const Spinor& base) {
    return tensor_grid(
        u, Axis::point(0.1), Axis::point(-0.2),
        [](double uu, double, double) { return cplx(1.0 + 0.3 * uu, 0.2); }, [&](double, double, double) { return base; });
}

}  // namespace

TEST_CASE("mass oscillation: regulated spacetime pairing matches the sign-weighted product") {
    const auto h = PlaneWavePotential::harmonic(0.2, 1.0);
    const Spinor a = lightcone_operators().pi_minus * random_spinor();
    const Spinor b = lightcone_operators().pi_minus * random_spinor();
    const Axis u = Axis::trapezoid(-0.08, -0.04, 3);
    const auto fa = build_mass_family(0.8, 1.2, 21, MassWeight::bump(0.8, 1.2), oscillation_nodes(u, a));
    const auto fb = build_mass_family(0.8, 1.2, 21, MassWeight::bump(0.8, 1.2), oscillation_nodes(u, a));
    const auto r = mass_oscillation_check(fa, fb, h);
    CHECK(r.rhs.real() < 0.0);
    CHECK(r.lhs.real() < 0.0);
    CHECK(r.relative_gap <= 1e-2);
    CHECK(r.lhs_per_epsilon.size() == 3);

    // Different spinors: complex rhs, still matched.
    const auto fc = build_mass_family(0.8, 1.2, 21, MassWeight::bump(0.8, 1.2), oscillation_nodes(u, b));
    const auto r2 = mass_oscillation_check(fa, fc, h);
    CHECK(r2.relative_gap <= 1e-2);
}

TEST_CASE("mass oscillation: mixed signs of u") {
    const auto zero = PlaneWavePotential::zero();
    const Spinor a = lightcone_operators().pi_minus * Spinor::Ones();
    Axis u{{-0.08, -0.06, -0.04, 0.04, 0.06, 0.08}, {0.01, 0.02, 0.01, 0.01, 0.02, 0.01}};
    auto nodes = tensor_grid(
        u, Axis::point(0), Axis::point(0), [](double uu, double, double) { return cplx(uu < 0 ? 1.0 : 0.5); },
        [&](double, double, double) { return a; });
    const auto fam = build_mass_family(0.8, 1.2, 21, MassWeight::bump(0.8, 1.2), nodes);
    const auto r = mass_oscillation_check(fam, fam, zero);
    CHECK(r.rhs.real() < 0.0);
    CHECK(r.relative_gap <= 1e-2);
}

TEST_CASE("mass oscillation: disjoint supports and rejected inputs") {
    const auto h = PlaneWavePotential::harmonic(0.2, 1.0);
    const Spinor a = lightcone_operators().pi_minus * Spinor::Ones();
    const Axis u = Axis::trapezoid(-0.08, -0.04, 3);
    const auto nodes = oscillation_nodes(u, a);
    const auto diag = build_mass_family(0.8, 1.2, 21, MassWeight::bump(0.8, 1.2), nodes);
    const auto low = build_mass_family(0.8, 1.2, 21, MassWeight::bump(0.8, 0.9), nodes);
    const auto high = build_mass_family(0.8, 1.2, 21, MassWeight::bump(1.1, 1.2), nodes);
    const auto ref = mass_oscillation_check(diag, diag, h);
    const auto r = mass_oscillation_check(low, high, h);
    CHECK(std::abs(r.rhs) == 0.0);
    CHECK(std::abs(r.lhs) <= 1e-3 * std::abs(ref.rhs));

    const auto box = build_mass_family(0.8, 1.2, 21, MassWeight::box(0.9, 1.1), nodes);
    CHECK_THROWS_AS(mass_oscillation_check(box, box, h), DomainError);
    const auto other = build_mass_family(0.8, 1.2, 11, MassWeight::bump(0.8, 1.2), nodes);
    CHECK_THROWS_AS(mass_oscillation_check(diag, other, h), GridError);
}

TEST_CASE("mass oscillation is independent of the worker count") {
    const auto h = PlaneWavePotential::harmonic(0.2, 1.0);
    const Spinor a = lightcone_operators().pi_minus * Spinor::Ones();
    const auto nodes = oscillation_nodes(Axis::trapezoid(-0.08, -0.04, 4), a);
    const auto fam = build_mass_family(0.8, 1.2, 9, MassWeight::bump(0.8, 1.2), nodes);
    const SGrid grid{-10, 10, 0.2};
    const auto one = mass_oscillation_check(fam, fam, h, {0.1, 0.05, 0.025}, grid, 1);
    const auto many = mass_oscillation_check(fam, fam, h, {0.1, 0.05, 0.025}, grid, 3);
    CHECK(one.lhs == many.lhs);
    CHECK(one.rhs == many.rhs);
}

namespace {

SmearProfile random_profile(double mass, std::size_t n) {
    SmearProfile p;
    p.mass = mass;
    for (std::size_t i = 0; i < n; ++i)
        p.nodes.push_back({-0.4 - 0.3 * static_cast<double>(i), 0.2 * static_cast<double>(i), -0.1, 0.25, random_spinor(),
                           uniform(-1, 1), uniform(0.7, 1.5)});
    return p;
}

// ∫ exp(-(s-c)²/2w²) e^{ivs} ds
cplx gaussian_transform(double c, double w, double v) {
    return std::sqrt(2 * M_PI) * w * std::exp(I * v * c - 0.5 * w * w * v * v);
}

}  // namespace

TEST_CASE("smeared projector pairing") {
    const auto zero = PlaneWavePotential::zero();
    const auto& ops = lightcone_operators();
    const SmearProfile phi = random_profile(1.0, 3);
    const SmearProfile psi = random_profile(1.0, 3);
    SmearProfile psi_grid = psi;
    for (std::size_t i = 0; i < psi.nodes.size(); ++i) {
        psi_grid.nodes[i].u = phi.nodes[i].u;
        psi_grid.nodes[i].k2 = phi.nodes[i].k2;
        psi_grid.nodes[i].k3 = phi.nodes[i].k3;
    }
    const cplx value = fp_pair_smeared(phi, psi_grid, zero);

    // Direct oracle: the kernel is M e^{-i v (s - s̃)} with constant M, so
    // the double integral factorises into Gaussian transforms.
    cplx oracle = 0.0;
    for (std::size_t i = 0; i < phi.nodes.size(); ++i) {
        const auto& a = phi.nodes[i];
        const auto& b = psi_grid.nodes[i];
        const double v = (a.k2 * a.k2 + a.k3 * a.k3 + 1.0) / (4 * a.u);
        const SpinMatrix slash = transverse_slash(a.k2, a.k3, 0, 0) + identity_matrix();
        const cplx a0 = 1.0 / c4;
        const SpinMatrix b0 = (a0 / (2 * a.u)) * slash;
        const SpinMatrix m = a0 * ops.n_minus + ops.pi_minus * b0 + (1.0 / (2 * a.u)) * slash * (ops.n_plus * b0 + a0 * ops.pi_plus);
        oracle += a.quad_weight * std::conj(gaussian_transform(a.center, a.width, v)) *
                  gaussian_transform(b.center, b.width, v) * spin_inner(a.spinor, m * b.spinor);
    }
    oracle *= std::pow(2 * M_PI, 6) / 4.0;
    CHECK(std::abs(value - oracle) <= 1e-10 * std::abs(oracle));

    const auto h = PlaneWavePotential::harmonic(0.3, 1.2);
    const cplx ab = fp_pair_smeared(phi, psi_grid, h);
    const cplx ba = fp_pair_smeared(psi_grid, phi, h);
    CHECK(std::abs(ab - std::conj(ba)) <= 1e-12 * std::abs(ab));

    SmearProfile scaled = phi;
    const cplx c(0.6, -1.3);
    for (auto& n : scaled.nodes) n.spinor *= c;
    const cplx self = fp_pair_smeared(phi, phi, h);
    const cplx self_scaled = fp_pair_smeared(scaled, scaled, h);
    CHECK(std::abs(self_scaled - std::norm(c) * self) <= 1e-12 * std::abs(self_scaled));

    SmearProfile bad = phi;
    bad.nodes[0].u = 0.3;
    CHECK_THROWS_AS(fp_pair_smeared(bad, bad, h), DomainError);
    CHECK_THROWS_AS(fp_pair_smeared(phi, random_profile(1.0, 2), h), GridError);
}
