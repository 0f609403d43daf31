#include "volkov/projector.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "volkov/error.hpp"
#include "volkov/parallel.hpp"

namespace volkov {

namespace {

constexpr double two_pi = 2.0 * M_PI;

double theta(double x) {
    if (x > 0.0) return 1.0;
    if (x < 0.0) return 0.0;
    return 0.5;
}

SpinMatrix slash_plus_m(const ModeParams& mode, const PlaneWavePotential& pot, double s) {
    const TransverseField a = pot.field(s);
    return transverse_slash(mode.k2, mode.k3, a.a2, a.a3) + mode.m * identity_matrix();
}

}  // namespace

GreenCoefficients green_ab(const ModeParams& mode, const PlaneWavePotential& pot, double s, double s_tilde,
                           GreenKind which) {
    const cplx e = phase_factor(mode, pot, s_tilde, s);
    const double step = which == GreenKind::retarded ? theta(s - s_tilde) : theta(s_tilde - s);
    const double sign = which == GreenKind::retarded ? -1.0 : 1.0;
    const double c3 = std::pow(two_pi, 3);
    GreenCoefficients g;
    g.a = sign * I / c3 * step * e;
    g.b = (sign * I / (4.0 * mode.u) * 2.0 / c3 * step * e) * slash_plus_m(mode, pot, s_tilde);
    g.has_delta_term = true;
    g.delta_coefficient = 2.0 / (c3 * 2.0 * mode.u);
    return g;
}

SpinMatrix assemble_kernel(const ModeParams& mode, const PlaneWavePotential& pot, double s, cplx a,
                           const SpinMatrix& b) {
    const auto& ops = lightcone_operators();
    const SpinMatrix tail = ops.n_plus * b + a * ops.pi_plus;
    return a * ops.n_minus + ops.pi_minus * b + (1.0 / (2.0 * mode.u)) * (slash_plus_m(mode, pot, s) * tail);
}

SpinMatrix green_kernel(const ModeParams& mode, const PlaneWavePotential& pot, double s, double s_tilde,
                        GreenKind which) {
    const GreenCoefficients g = green_ab(mode, pot, s, s_tilde, which);
    return assemble_kernel(mode, pot, s, g.a, g.b);
}

SpinMatrix causal_fundamental_momentum(const ModeParams& mode, const PlaneWavePotential& pot, double s,
                                       double s_tilde) {
    const GreenCoefficients adv = green_ab(mode, pot, s, s_tilde, GreenKind::advanced);
    const GreenCoefficients ret = green_ab(mode, pot, s, s_tilde, GreenKind::retarded);
    // The δ terms of both Green's functions are identical and drop out here.
    const cplx norm = 1.0 / (two_pi * I);
    return assemble_kernel(mode, pot, s, norm * (adv.a - ret.a), norm * (adv.b - ret.b));
}

int signature_sign(double u) {
    if (u == 0.0 || !std::isfinite(u)) throw DomainError("signature sign is undefined at u = 0");
    return u > 0.0 ? 1 : -1;
}

cplx fp_scalar_a(const ModeParams& mode, const PlaneWavePotential& pot, double s, double s_tilde) {
    return phase_factor(mode, pot, s_tilde, s) / std::pow(two_pi, 4);
}

SpinMatrix fp_kernel_momentum(const ModeParams& mode, const PlaneWavePotential& pot, double s, double s_tilde) {
    if (!(mode.u < 0.0)) throw DomainError(fmt::format("fermionic projector kernel needs u < 0, got {}", mode.u));
    const cplx a = fp_scalar_a(mode, pot, s, s_tilde);
    const SpinMatrix b = (a / (2.0 * mode.u)) * slash_plus_m(mode, pot, s_tilde);
    return assemble_kernel(mode, pot, s, a, b);
}

KernelSample sample_fp_kernel(const ModeParams& mode, const PlaneWavePotential& pot, double s, double s_tilde) {
    return {mode.u, mode.k2, mode.k3, mode.m, s, s_tilde, fp_kernel_momentum(mode, pot, s, s_tilde)};
}

void write_kernel_csv(std::ostream& out, const std::vector<KernelSample>& samples) {
    out << "u,k2,k3,s,s_tilde";
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out << ",re_" << i << j << ",im_" << i << j;
    out << '\n';
    for (const auto& k : samples) {
        out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}", k.u, k.k2, k.k3, k.s, k.s_tilde);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) out << fmt::format(",{:.17g},{:.17g}", k.value(i, j).real(), k.value(i, j).imag());
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// Mass oscillation

cplx extrapolate_to_zero(const std::vector<double>& eps, const std::vector<cplx>& values) {
    if (eps.empty() || eps.size() != values.size()) throw DomainError("extrapolation needs matching nonempty arrays");
    cplx out = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        double w = 1.0;
        for (std::size_t k = 0; k < eps.size(); ++k) {
            if (k == i) continue;
            if (eps[k] == eps[i]) throw DomainError("extrapolation needs distinct regulator values");
            w *= (0.0 - eps[k]) / (eps[i] - eps[k]);
        }
        out += w * values[i];
    }
    return out;
}

namespace {

void check_families(const MassFamily& psi, const MassFamily& phi) {
    psi.validate();
    phi.validate();
    if (!psi.eta.smooth() || !phi.eta.smooth())
        throw DomainError("mass oscillation check requires smooth mass weights (box weight given)");
    if (psi.masses != phi.masses || psi.mass_weights != phi.mass_weights)
        throw GridError("mass oscillation check: families use different mass grids");
    for (std::size_t i = 0; i < psi.packets.size(); ++i)
        if (!same_grid(psi.packets[i], phi.packets[i]))
            throw GridError("mass oscillation check: families use different momentum grids");
    if (psi.packets.empty()) throw GridError("mass oscillation check: empty mass grid");
    const auto& ref = psi.packets.front();
    for (const auto& p : psi.packets)
        for (std::size_t j = 0; j < p.nodes.size(); ++j)
            if (p.nodes.size() != ref.nodes.size() || p.nodes[j].u != ref.nodes[j].u || p.nodes[j].k2 != ref.nodes[j].k2 ||
                p.nodes[j].k3 != ref.nodes[j].k3 || p.nodes[j].quad_weight != ref.nodes[j].quad_weight)
                throw GridError("mass oscillation check: momentum grid varies across masses");
}

// p χ(s) = Σ_m w_m χ^m(s) at node j.
Spinor mass_integrated(const MassFamily& fam, std::size_t j, const PlaneWavePotential& pot, double s) {
    Spinor acc = Spinor::Zero();
    for (std::size_t i = 0; i < fam.masses.size(); ++i) {
        const auto& node = fam.packets[i].nodes[j];
        if (node.weight == 0.0) continue;
        const ModeParams mode = fam.packets[i].mode(j);
        const Spinor pm = (node.weight * phase_factor(mode, pot, 0.0, s)) * node.chi0;
        acc += fam.mass_weights[i] * reconstruct_full(pm, mode, pot, s);
    }
    return acc;
}

}  // namespace

MassOscillationResult mass_oscillation_check(const MassFamily& psi, const MassFamily& phi, const PlaneWavePotential& pot,
                                             const std::vector<double>& epsilons, const SGrid& grid, unsigned workers) {
    check_families(psi, phi);
    if (epsilons.empty()) throw DomainError("mass oscillation check needs at least one regulator value");
    for (double e : epsilons)
        if (!(e > 0.0)) throw DomainError("regulator values must be positive");
    if (!(grid.step > 0.0) || !(grid.hi > grid.lo)) throw GridError("mass oscillation check: malformed s-grid");

    const auto ns = static_cast<std::size_t>(std::llround((grid.hi - grid.lo) / grid.step)) + 1;
    const std::size_t n_nodes = psi.packets.front().nodes.size();
    const std::size_t n_eps = epsilons.size();

    // per node, per ε
    std::vector<cplx> node_values(n_nodes * n_eps);
    parallel_for(n_nodes, workers, [&](std::size_t j) {
        std::vector<std::vector<cplx>> terms(n_eps, std::vector<cplx>(ns));
        for (std::size_t k = 0; k < ns; ++k) {
            const double s = grid.lo + grid.step * static_cast<double>(k);
            const cplx f = spin_inner(mass_integrated(psi, j, pot, s), mass_integrated(phi, j, pot, s));
            const double w = (k == 0 || k + 1 == ns) ? 0.5 * grid.step : grid.step;
            for (std::size_t e = 0; e < n_eps; ++e) terms[e][k] = w * std::exp(-epsilons[e] * s * s) * f;
        }
        for (std::size_t e = 0; e < n_eps; ++e) node_values[j * n_eps + e] = compensated_sum(terms[e]);
    });

    MassOscillationResult out;
    out.epsilons = epsilons;
    const double pref = 4.0 * std::pow(M_PI, 3);
    for (std::size_t e = 0; e < n_eps; ++e) {
        std::vector<cplx> terms(n_nodes);
        for (std::size_t j = 0; j < n_nodes; ++j)
            terms[j] = psi.packets.front().nodes[j].quad_weight * node_values[j * n_eps + e];
        out.lhs_per_epsilon.push_back(pref * compensated_sum(terms));
    }
    out.lhs = extrapolate_to_zero(epsilons, out.lhs_per_epsilon);

    std::vector<cplx> rhs_terms;
    rhs_terms.reserve(psi.masses.size() * n_nodes);
    for (std::size_t i = 0; i < psi.masses.size(); ++i)
        for (std::size_t j = 0; j < n_nodes; ++j) {
            const auto& a = psi.packets[i].nodes[j];
            const auto& b = phi.packets[i].nodes[j];
            const Spinor ca = a.weight * a.chi0;
            const Spinor cb = b.weight * b.chi0;
            rhs_terms.push_back(psi.mass_weights[i] * a.quad_weight * static_cast<double>(signature_sign(a.u)) *
                                spin_inner(ca, dirac_gamma(0) * cb));
        }
    out.rhs = std::pow(two_pi, 4) * compensated_sum(rhs_terms);
    out.gap = std::abs(out.lhs - out.rhs);
    out.relative_gap = std::abs(out.rhs) > 0.0 ? out.gap / std::abs(out.rhs) : std::numeric_limits<double>::infinity();
    return out;
}

// ---------------------------------------------------------------------------
// Smeared pairing

namespace {

struct SGridLocal {
    std::vector<double> s;
    std::vector<double> w;
};

SGridLocal profile_grid(const SmearNode& n, double step) {
    const double half = 10.0 * n.width;
    const auto count = static_cast<std::size_t>(std::ceil(2.0 * half / step));
    const double h = 2.0 * half / static_cast<double>(count);
    SGridLocal g;
    for (std::size_t i = 0; i <= count; ++i) {
        g.s.push_back(n.center - half + h * static_cast<double>(i));
        g.w.push_back((i == 0 || i == count) ? 0.5 * h : h);
    }
    return g;
}

double max_rate(const ModeParams& mode, const PlaneWavePotential& pot, double lo, double hi) {
    const PhaseQuery q = mode.phase_query();
    double r = 0.0;
    for (int i = 0; i <= 256; ++i) r = std::max(r, phase_integrand(pot, q, lo + (hi - lo) * i / 256.0));
    return r / (4.0 * std::abs(mode.u));
}

}  // namespace

cplx fp_pair_smeared(const SmearProfile& phi, const SmearProfile& psi, const PlaneWavePotential& pot,
                     int points_per_width, unsigned workers) {
    if (points_per_width < 2) throw GridError("smeared pairing: need at least two points per profile width");
    if (phi.mass != psi.mass || phi.nodes.size() != psi.nodes.size())
        throw GridError("smeared pairing: profiles use different grids");
    for (std::size_t j = 0; j < phi.nodes.size(); ++j) {
        const auto& a = phi.nodes[j];
        const auto& b = psi.nodes[j];
        if (a.u != b.u || a.k2 != b.k2 || a.k3 != b.k3 || a.quad_weight != b.quad_weight)
            throw GridError("smeared pairing: profiles use different grids");
        if (!(a.u < 0.0)) throw DomainError("smeared pairing: the projector needs u < 0 on every node");
        if (!(a.width > 0.0) || !(b.width > 0.0)) throw GridError("smeared pairing: profile widths must be positive");
    }

    std::vector<cplx> terms(phi.nodes.size());
    parallel_for(terms.size(), workers, [&](std::size_t j) {
        const SmearNode& a = phi.nodes[j];
        const SmearNode& b = psi.nodes[j];
        const ModeParams mode(a.k2, a.k3, a.u, phi.mass);
        const double lo = std::min(a.center - 10 * a.width, b.center - 10 * b.width);
        const double hi = std::max(a.center + 10 * a.width, b.center + 10 * b.width);
        const double rate = max_rate(mode, pot, lo, hi);
        auto step_for = [&](const SmearNode& n) { return std::min(n.width / points_per_width, M_PI / (4.0 * rate)); };
        const SGridLocal ga = profile_grid(a, step_for(a));
        const SGridLocal gb = profile_grid(b, step_for(b));

        std::vector<Spinor> rhs(gb.s.size());
        for (std::size_t k = 0; k < gb.s.size(); ++k) {
            const double d = (gb.s[k] - b.center) / b.width;
            rhs[k] = (gb.w[k] * std::exp(-0.5 * d * d)) * b.spinor;
        }
        std::vector<cplx> row(ga.s.size());
        for (std::size_t i = 0; i < ga.s.size(); ++i) {
            Spinor acc = Spinor::Zero();
            for (std::size_t k = 0; k < gb.s.size(); ++k) acc += fp_kernel_momentum(mode, pot, ga.s[i], gb.s[k]) * rhs[k];
            const double d = (ga.s[i] - a.center) / a.width;
            const Spinor left = (ga.w[i] * std::exp(-0.5 * d * d)) * a.spinor;
            row[i] = spin_inner(left, acc);
        }
        terms[j] = a.quad_weight * compensated_sum(row);
    });
    return std::pow(two_pi, 6) / 4.0 * compensated_sum(terms);
}

}  // namespace volkov
