#include "volkov/modes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "volkov/error.hpp"
#include "volkov/parallel.hpp"

namespace volkov {

ModeParams::ModeParams(double k2_, double k3_, double u_, double m_) : k2(k2_), k3(k3_), u(u_), m(m_) {
    if (!std::isfinite(k2) || !std::isfinite(k3) || !std::isfinite(u) || !std::isfinite(m))
        throw DomainError("mode parameters must be finite");
    if (u == 0.0) throw DomainError("separation constant u = 0 is excluded (the Π- amplitude vanishes there)");
    if (!(m > 0.0)) throw DomainError(fmt::format("mode mass must be positive, got {}", m));
}

namespace {

bool in_pi_minus_range(const Spinor& v) {
    const Spinor off = v - lightcone_operators().pi_minus * v;
    return off.norm() <= 1e-12 * std::max(v.norm(), 1e-300) || v.norm() == 0.0;
}

bool finite(const Spinor& v) {
    for (int i = 0; i < 4; ++i)
        if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
    return true;
}

}  // namespace

ModeAmplitude::ModeAmplitude(const Spinor& chi0_) : chi0(chi0_) {
    if (!finite(chi0)) throw DomainError("mode amplitude must be finite");
    if (!in_pi_minus_range(chi0)) throw DomainError("mode amplitude is not in the range of Π-");
}

ModeAmplitude ModeAmplitude::project(const Spinor& any) { return ModeAmplitude(lightcone_operators().pi_minus * any); }

cplx phase_factor(const ModeParams& mode, const PlaneWavePotential& pot, double s_from, double s_to) {
    const double phi = phase(pot, mode.phase_query(), s_from, s_to);
    return std::exp(-I * (phi / (4.0 * mode.u)));
}

Spinor propagate_pi_minus(const Spinor& pi_minus_chi, const ModeParams& mode, const PlaneWavePotential& pot,
                          double s_from, double s_to) {
    return phase_factor(mode, pot, s_from, s_to) * pi_minus_chi;
}

Spinor evolve_pi_minus(const ModeAmplitude& amp, const ModeParams& mode, const PlaneWavePotential& pot, double s) {
    return propagate_pi_minus(amp.chi0, mode, pot, 0.0, s);
}

namespace {

SpinMatrix slash_at(const ModeParams& mode, const PlaneWavePotential& pot, double s) {
    const TransverseField a = pot.field(s);
    return transverse_slash(mode.k2, mode.k3, a.a2, a.a3);
}

}  // namespace

Spinor reconstruct_full(const Spinor& pi_minus_chi, const ModeParams& mode, const PlaneWavePotential& pot, double s) {
    pot.check_domain(s);
    const auto& ops = lightcone_operators();
    const SpinMatrix shifted = slash_at(mode, pot, s) - mode.m * identity_matrix();
    const Spinor plus = -(1.0 / (2.0 * mode.u)) * (ops.n_plus * (shifted * pi_minus_chi));
    return pi_minus_chi + plus;
}

double constraint_residual(const Spinor& chi, const ModeParams& mode, const PlaneWavePotential& pot, double s) {
    const auto& ops = lightcone_operators();
    const SpinMatrix shifted = slash_at(mode, pot, s) - mode.m * identity_matrix();
    return (2.0 * mode.u * (ops.n_minus * chi) + shifted * (ops.pi_minus * chi)).norm();
}

namespace {

cplx plane_factor(const ModeParams& mode, const NullPoint& p) {
    return std::exp(-I * (mode.k2 * p.y + mode.k3 * p.z + mode.u * p.l));
}

}  // namespace

Spinor mode_wavefunction(const ModeAmplitude& amp, const ModeParams& mode, const PlaneWavePotential& pot,
                         const NullPoint& p) {
    const Spinor chi = reconstruct_full(evolve_pi_minus(amp, mode, pot, p.s), mode, pot, p.s);
    return plane_factor(mode, p) * chi;
}

namespace {

Spinor dirac_operator(const std::array<Spinor, 4>& d, const Spinor& psi, const ModeParams& mode,
                      const PlaneWavePotential& pot, double s) {
    const TransverseField a = pot.field(s);
    Spinor out = -mode.m * psi;
    for (int j = 0; j < 4; ++j) out += I * (dirac_gamma(j) * d[static_cast<std::size_t>(j)]);
    out += a.a2 * (dirac_gamma(2) * psi) + a.a3 * (dirac_gamma(3) * psi);
    return out;
}

}  // namespace

double dirac_residual(const ModeAmplitude& amp, const ModeParams& mode, const PlaneWavePotential& pot,
                      const NullPoint& p) {
    const auto& ops = lightcone_operators();
    const PhaseQuery q = mode.phase_query();
    const Spinor pm = evolve_pi_minus(amp, mode, pot, p.s);
    const Spinor pm_ds = (-I * (phase_integrand(pot, q, p.s) / (4.0 * mode.u))) * pm;

    const TransverseField da = pot.field_derivative(p.s);
    const SpinMatrix slash_ds = da.a2 * dirac_gamma(2) + da.a3 * dirac_gamma(3);
    const SpinMatrix shifted = slash_at(mode, pot, p.s) - mode.m * identity_matrix();
    const Spinor pp = -(1.0 / (2.0 * mode.u)) * (ops.n_plus * (shifted * pm));
    const Spinor pp_ds = -(1.0 / (2.0 * mode.u)) * (ops.n_plus * (slash_ds * pm + shifted * pm_ds));

    const cplx pre = plane_factor(mode, p);
    const Spinor psi = pre * (pm + pp);
    const Spinor d_s = pre * (pm_ds + pp_ds);
    const Spinor d_l = (-I * mode.u) * psi;
    const std::array<Spinor, 4> d = {d_s + d_l, d_s - d_l, (-I * mode.k2) * psi, (-I * mode.k3) * psi};
    return dirac_operator(d, psi, mode, pot, p.s).norm();
}

double dirac_residual_fd(const ModeAmplitude& amp, const ModeParams& mode, const PlaneWavePotential& pot,
                         const NullPoint& p, double h) {
    if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
    auto at = [&](double ds, double dl, double dy, double dz) {
        return mode_wavefunction(amp, mode, pot, {p.s + ds, p.l + dl, p.y + dy, p.z + dz});
    };
    const double inv = 1.0 / (2.0 * h);
    const std::array<Spinor, 4> d = {
        (at(h, h, 0, 0) - at(-h, -h, 0, 0)) * inv,  // t
        (at(h, -h, 0, 0) - at(-h, h, 0, 0)) * inv,  // x
        (at(0, 0, h, 0) - at(0, 0, -h, 0)) * inv,   // y
        (at(0, 0, 0, h) - at(0, 0, 0, -h)) * inv,   // z
    };
    return dirac_operator(d, mode_wavefunction(amp, mode, pot, p), mode, pot, p.s).norm();
}

// ---------------------------------------------------------------------------
// Wavepackets

void WavePacket::validate() const {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError(fmt::format("packet mass must be positive, got {}", mass));
    std::set<std::tuple<double, double, double>> seen;
    for (const auto& n : nodes) {
        if (!std::isfinite(n.u) || !std::isfinite(n.k2) || !std::isfinite(n.k3) || !std::isfinite(n.quad_weight) ||
            !std::isfinite(n.weight.real()) || !std::isfinite(n.weight.imag()) || !finite(n.chi0))
            throw DomainError("packet node has non-finite data");
        if (n.u == 0.0) throw DomainError("packet node with u = 0");
        if (!in_pi_minus_range(n.chi0)) throw DomainError("packet node amplitude is not in the range of Π-");
        if (!seen.emplace(n.u, n.k2, n.k3).second)
            throw DomainError(fmt::format("repeated packet node (u, k2, k3) = ({}, {}, {})", n.u, n.k2, n.k3));
    }
}

Axis Axis::trapezoid(double a, double b, std::size_t n) {
    if (n < 2 || !(b > a)) throw GridError(fmt::format("trapezoid axis needs n >= 2 and b > a (got n = {}, [{}, {}])", n, a, b));
    Axis ax;
    const double h = (b - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        ax.nodes.push_back(i + 1 == n ? b : a + h * static_cast<double>(i));
        ax.weights.push_back((i == 0 || i + 1 == n) ? 0.5 * h : h);
    }
    return ax;
}

Axis Axis::point(double x) { return Axis{{x}, {1.0}}; }

std::vector<PacketNode> tensor_grid(const Axis& u, const Axis& k2, const Axis& k3, const NodeWeight& weight,
                                    const NodeSpinor& chi0) {
    std::vector<PacketNode> out;
    out.reserve(u.nodes.size() * k2.nodes.size() * k3.nodes.size());
    for (std::size_t i = 0; i < u.nodes.size(); ++i)
        for (std::size_t j = 0; j < k2.nodes.size(); ++j)
            for (std::size_t k = 0; k < k3.nodes.size(); ++k) {
                const double uu = u.nodes[i], kk2 = k2.nodes[j], kk3 = k3.nodes[k];
                if (uu == 0.0) throw GridError("u = 0 must be excluded from packet grids");
                const Spinor c = lightcone_operators().pi_minus * chi0(uu, kk2, kk3);
                out.push_back({uu, kk2, kk3, u.weights[i] * k2.weights[j] * k3.weights[k], weight(uu, kk2, kk3), c});
            }
    return out;
}

double smooth_bump(double x, double a, double b) {
    const double t = (2.0 * x - a - b) / (b - a);
    if (!(std::abs(t) < 1.0)) return 0.0;
    return std::exp(-1.0 / (1.0 - t * t));
}

bool same_grid(const WavePacket& a, const WavePacket& b) {
    if (a.mass != b.mass || a.nodes.size() != b.nodes.size()) return false;
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        const auto& x = a.nodes[i];
        const auto& y = b.nodes[i];
        if (x.u != y.u || x.k2 != y.k2 || x.k3 != y.k3 || x.quad_weight != y.quad_weight) return false;
    }
    return true;
}

namespace {

constexpr double two_pi = 2.0 * M_PI;

}  // namespace

cplx null_scalar_product(const WavePacket& psi, const WavePacket& phi, const PlaneWavePotential& pot, double s,
                         unsigned workers) {
    if (!same_grid(psi, phi)) throw GridError("null scalar product: packets do not share mass and grid");
    const auto& ops = lightcone_operators();
    std::vector<cplx> terms(psi.nodes.size());
    parallel_for(terms.size(), workers, [&](std::size_t i) {
        const ModeParams mode = psi.mode(i);
        const cplx f = phase_factor(mode, pot, 0.0, s);
        const Spinor a = psi.nodes[i].weight * f * psi.nodes[i].chi0;
        const Spinor b = phi.nodes[i].weight * f * phi.nodes[i].chi0;
        terms[i] = psi.nodes[i].quad_weight * spin_inner(ops.pi_minus * a, dirac_gamma(0) * (ops.pi_minus * b));
    });
    return std::pow(two_pi, 4) * compensated_sum(terms);
}

PairingSides mass_pairing_identity(const ModeAmplitude& amp, const ModeAmplitude& amp_prime, double k2, double k3,
                                   double u, double m, double m_prime, const PlaneWavePotential& pot, double s) {
    const ModeParams mode(k2, k3, u, m);
    const ModeParams mode_prime(k2, k3, u, m_prime);
    const Spinor chi = reconstruct_full(evolve_pi_minus(amp, mode, pot, s), mode, pot, s);
    const Spinor chi_prime = reconstruct_full(evolve_pi_minus(amp_prime, mode_prime, pot, s), mode_prime, pot, s);
    PairingSides out;
    out.lhs = 2.0 * u * spin_inner(chi, chi_prime);
    out.rhs = (m + m_prime) * std::exp(I * ((m * m - m_prime * m_prime) * s / (4.0 * u))) *
              spin_inner(amp.chi0, dirac_gamma(0) * amp_prime.chi0);
    return out;
}

// ---------------------------------------------------------------------------
// Null decay

DecayReport null_decay_scan(const WavePacket& packet, const PlaneWavePotential& pot, const std::vector<double>& s_values,
                            const std::vector<double>& l_values, double threshold, unsigned workers) {
    packet.validate();
    if (packet.nodes.empty()) throw DomainError("decay scan: empty packet");
    for (double l : l_values)
        if (!(l > 0.0)) throw DomainError("decay scan: l values must be positive (both signs are scanned)");
    if (l_values.size() < 8) throw DomainError("decay scan: need at least 8 l values");
    const double l_lo = *std::min_element(l_values.begin(), l_values.end());
    const double l_hi = *std::max_element(l_values.begin(), l_values.end());

    std::vector<double> ls = l_values;
    std::sort(ls.begin(), ls.end());

    DecayReport report;
    report.l_values = ls;
    report.threshold = threshold;
    const auto& pim = lightcone_operators().pi_minus;
    const std::size_t n = ls.size();

    for (double s : s_values) {
        std::vector<Spinor> c(packet.nodes.size());
        parallel_for(c.size(), workers, [&](std::size_t j) {
            const auto& node = packet.nodes[j];
            c[j] = (node.quad_weight * node.weight * phase_factor(packet.mode(j), pot, 0.0, s)) * (pim * node.chi0);
        });
        std::vector<double> mag(2 * n);
        parallel_for(2 * n, workers, [&](std::size_t i) {
            const double l = i < n ? ls[i] : -ls[i - n];
            Spinor acc = Spinor::Zero();
            for (std::size_t j = 0; j < c.size(); ++j) acc += std::exp(-I * (packet.nodes[j].u * l)) * c[j];
            mag[i] = acc.norm();
        });

        const std::vector<double> pos(mag.begin(), mag.begin() + static_cast<std::ptrdiff_t>(n));
        const std::vector<double> neg(mag.begin() + static_cast<std::ptrdiff_t>(n), mag.end());
        DecayScanRow row;
        row.s = s;
        row.positive_l = decay_order_fit(ls, tail_envelope(pos), l_lo, l_hi);
        row.negative_l = decay_order_fit(ls, tail_envelope(neg), l_lo, l_hi);
        row.order = std::min(row.positive_l.order, row.negative_l.order);
        row.peak = *std::max_element(mag.begin(), mag.end());
        report.rows.push_back(row);
        report.magnitudes.push_back(std::move(mag));
    }
    report.min_order = report.rows.empty() ? 0.0 : report.rows.front().order;
    for (const auto& r : report.rows) report.min_order = std::min(report.min_order, r.order);
    report.decaying = !report.rows.empty() && report.min_order >= threshold;
    return report;
}

// ---------------------------------------------------------------------------
// Mass families

MassWeight::MassWeight(Kind k, double lo, double hi, double center, double width)
    : kind_(k), lo_(lo), hi_(hi), center_(center), width_(width) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) throw DomainError("mass weight needs lo < hi");
    if (k == Kind::gaussian_bump && !(width > 0.0)) throw DomainError("mass weight Gaussian width must be positive");
}

MassWeight MassWeight::bump(double lo, double hi) { return {Kind::bump, lo, hi, 0.5 * (lo + hi), 0.0}; }

MassWeight MassWeight::gaussian_bump(double lo, double hi, double center, double width) {
    return {Kind::gaussian_bump, lo, hi, center, width};
}

MassWeight MassWeight::box(double lo, double hi) { return {Kind::box, lo, hi, 0.5 * (lo + hi), 0.0}; }

double MassWeight::operator()(double m) const {
    switch (kind_) {
        case Kind::bump: return smooth_bump(m, lo_, hi_);
        case Kind::gaussian_bump: {
            const double d = (m - center_) / width_;
            return smooth_bump(m, lo_, hi_) * std::exp(-0.5 * d * d);
        }
        case Kind::box: return (m >= lo_ && m <= hi_) ? 1.0 : 0.0;
    }
    return 0.0;
}

void MassFamily::validate() const {
    if (!(m_lo > 0.0) || !(m_hi > m_lo)) throw DomainError(fmt::format("mass interval ({}, {}) must satisfy 0 < mL < mR", m_lo, m_hi));
    if (eta(m_lo) != 0.0 || eta(m_hi) != 0.0) throw DomainError("mass weight must vanish at the interval ends");
    if (eta.lo() < m_lo || eta.hi() > m_hi) throw DomainError("mass weight support must lie inside the interval");
    if (masses.size() != packets.size() || masses.size() != mass_weights.size())
        throw DomainError("mass family arrays differ in length");
    for (std::size_t i = 0; i < masses.size(); ++i) {
        if (packets[i].mass != masses[i]) throw DomainError("mass family packet mass does not match its grid point");
        packets[i].validate();
        if (i > 0 && !(masses[i] > masses[i - 1])) throw DomainError("mass grid must be strictly increasing");
    }
}

MassFamily build_mass_family(double m_lo, double m_hi, std::size_t n, const MassWeight& eta,
                             const std::vector<PacketNode>& nodes) {
    const Axis ax = Axis::trapezoid(m_lo, m_hi, n);
    MassFamily fam{m_lo, m_hi, eta, ax.nodes, ax.weights, {}};
    for (double m : fam.masses) {
        WavePacket p;
        p.mass = m;
        p.nodes = nodes;
        const double w = eta(m);
        for (auto& node : p.nodes) node.weight *= w;
        fam.packets.push_back(std::move(p));
    }
    fam.validate();
    return fam;
}

}  // namespace volkov
