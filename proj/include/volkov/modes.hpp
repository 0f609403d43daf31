#pragma once

// Separated Dirac modes in a plane wave,
//
//     ψ(s, l, y, z) = e^{-i k2 y - i k3 z} e^{-i u l} χ(s),
//
// with Π-χ(s) = exp(-i Φ(0, s) / 4u) Π-χ(0) and the Π+ component fixed
// algebraically by 2u N- χ = -(𝒜(s) - m) Π-χ. Also wavepackets over
// (u, k2, k3) grids, mass families, and the null-surface identities.

#include <functional>
#include <optional>
#include <vector>

#include "volkov/clifford.hpp"
#include "volkov/decay_fit.hpp"
#include "volkov/potential.hpp"

namespace volkov {

struct ModeParams {
    double k2;
    double k3;
    double u;
    double m;

    /// Throws DomainError unless u != 0, m > 0 and all entries are finite.
    ModeParams(double k2_, double k3_, double u_, double m_);

    PhaseQuery phase_query() const { return {k2, k3, m}; }
};

/// Initial data Π-χ(0) on the reference surface s = 0.
struct ModeAmplitude {
    Spinor chi0;

    /// Throws DomainError if chi0 is not in the range of Π- (relative
    /// tolerance 1e-12).
    explicit ModeAmplitude(const Spinor& chi0_);

    /// Projects an arbitrary spinor onto the range of Π-.
    static ModeAmplitude project(const Spinor& any);
};

struct NullPoint {
    double s = 0.0;
    double l = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// exp(-i Φ(s_from, s_to) / 4u).
cplx phase_factor(const ModeParams& mode, const PlaneWavePotential& pot, double s_from, double s_to);

/// Carries Π-χ given at s_from to s_to.
Spinor propagate_pi_minus(const Spinor& pi_minus_chi, const ModeParams& mode, const PlaneWavePotential& pot,
                          double s_from, double s_to);

/// Π-χ(s) from the data at s = 0.
Spinor evolve_pi_minus(const ModeAmplitude& amp, const ModeParams& mode, const PlaneWavePotential& pot, double s);

/// Π-χ + Π+χ with Π+χ = -(1/2u) N+ (𝒜(s) - m) Π-χ.
Spinor reconstruct_full(const Spinor& pi_minus_chi, const ModeParams& mode, const PlaneWavePotential& pot, double s);

/// ‖2u N- χ + (𝒜(s) - m) Π-χ‖ for a reconstructed χ.
double constraint_residual(const Spinor& chi, const ModeParams& mode, const PlaneWavePotential& pot, double s);

Spinor mode_wavefunction(const ModeAmplitude& amp, const ModeParams& mode, const PlaneWavePotential& pot,
                         const NullPoint& p);

/// ‖(iγ^j ∂_j + γ²A2 + γ³A3 - m) ψ‖ at p, with the derivatives of the
/// closed-form mode taken analytically and combined in Cartesian form
/// (∂_t = ∂_s + ∂_l, ∂_x = ∂_s - ∂_l).
double dirac_residual(const ModeAmplitude& amp, const ModeParams& mode, const PlaneWavePotential& pot,
                      const NullPoint& p);

/// Same operator with central differences of step h in t, x, y, z.
double dirac_residual_fd(const ModeAmplitude& amp, const ModeParams& mode, const PlaneWavePotential& pot,
                         const NullPoint& p, double h);

// ---------------------------------------------------------------------------
// Wavepackets

struct PacketNode {
    double u;
    double k2;
    double k3;
    double quad_weight;  // quadrature weight of the (u, k2, k3) grid
    cplx weight;         // packet weight at this node
    Spinor chi0;         // Π-χ(0), in the range of Π-
};

struct WavePacket {
    double mass = 1.0;
    std::vector<PacketNode> nodes;

    /// Throws DomainError on a nonpositive mass, u = 0, non-finite data,
    /// chi0 outside range(Π-) or repeated nodes.
    void validate() const;

    ModeParams mode(std::size_t i) const { return {nodes[i].k2, nodes[i].k3, nodes[i].u, mass}; }
};

/// Quadrature axis: nodes and weights.
struct Axis {
    std::vector<double> nodes;
    std::vector<double> weights;

    /// n equispaced nodes on [a, b] with trapezoid weights.
    static Axis trapezoid(double a, double b, std::size_t n);
    /// A single node with unit weight.
    static Axis point(double x);
};

using NodeWeight = std::function<cplx(double u, double k2, double k3)>;
using NodeSpinor = std::function<Spinor(double u, double k2, double k3)>;

/// Tensor-product grid over (u, k2, k3). Nodes whose weight vanishes
/// are kept so that packets built on the same axes share a grid.
std::vector<PacketNode> tensor_grid(const Axis& u, const Axis& k2, const Axis& k3, const NodeWeight& weight,
                                    const NodeSpinor& chi0);

/// C∞ bump exp(-1 / (1 - t²)), t = (2x - a - b) / (b - a), zero outside (a, b).
double smooth_bump(double x, double a, double b);

/// True when both packets have the same mass and identical node
/// coordinates and quadrature weights.
bool same_grid(const WavePacket& a, const WavePacket& b);

/// (ψ|φ) = (2π)⁴ Σ q ≺Π-χ_ψ(s) | γ⁰ Π-χ_φ(s)≻ evaluated at the surface s.
/// Throws GridError when the packets do not share a grid.
cplx null_scalar_product(const WavePacket& psi, const WavePacket& phi, const PlaneWavePotential& pot, double s,
                         unsigned workers = 1);

struct PairingSides {
    cplx lhs;  // 2u ≺χ^m(s) | χ^{m'}(s)≻ from reconstructed spinors
    cplx rhs;  // (m + m') e^{i(m² - m'²)s/4u} ≺Π-χ^m(0) | γ⁰ Π-χ^{m'}(0)≻
};

/// Both sides of the mass pairing identity for two modes sharing (k2, k3, u).
PairingSides mass_pairing_identity(const ModeAmplitude& amp, const ModeAmplitude& amp_prime, double k2, double k3,
                                   double u, double m, double m_prime, const PlaneWavePotential& pot, double s);

// ---------------------------------------------------------------------------
// Null decay

struct DecayScanRow {
    double s;
    DecayFit positive_l;  // fit on l > 0
    DecayFit negative_l;  // fit on l < 0
    double order;         // the smaller of the two
    double peak;          // max ‖Π-ψ‖ over the scanned l values
};

struct DecayReport {
    std::vector<DecayScanRow> rows;
    std::vector<double> l_values;
    /// ‖Π-ψ(s, l)‖ at y = z = 0, rows[i] over l_values then -l_values.
    std::vector<std::vector<double>> magnitudes;
    double min_order = 0.0;
    double threshold = 1.0;
    /// False when min_order falls below the threshold (no decay).
    bool decaying = false;
};

/// Evaluates ‖Π-ψ(s, l)‖ at y = z = 0 for every s and ±l with l > 0 taken
/// from l_values, fits the decay order of the tail envelope over the
/// full l range, and reports the minimum over s and both directions.
DecayReport null_decay_scan(const WavePacket& packet, const PlaneWavePotential& pot, const std::vector<double>& s_values,
                            const std::vector<double>& l_values, double threshold = 1.0, unsigned workers = 1);

// ---------------------------------------------------------------------------
// Mass families

class MassWeight {
public:
    enum class Kind { bump, gaussian_bump, box };

    /// Smooth bump supported on (lo, hi).
    static MassWeight bump(double lo, double hi);
    /// Bump on (lo, hi) times a Gaussian of the given centre and width.
    static MassWeight gaussian_bump(double lo, double hi, double center, double width);
    /// Indicator of [lo, hi]; not smooth, rejected by the mass oscillation check.
    static MassWeight box(double lo, double hi);

    double operator()(double m) const;
    Kind kind() const { return kind_; }
    bool smooth() const { return kind_ != Kind::box; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double center() const { return center_; }
    double width() const { return width_; }

private:
    MassWeight(Kind k, double lo, double hi, double center, double width);

    Kind kind_;
    double lo_, hi_, center_, width_;
};

struct MassFamily {
    double m_lo;
    double m_hi;
    MassWeight eta;
    std::vector<double> masses;
    std::vector<double> mass_weights;  // trapezoid weights in m
    std::vector<WavePacket> packets;   // node weights include η(m)

    /// Throws DomainError if 0 < m_lo < m_hi fails, η does not vanish at
    /// the interval ends, or the packets are inconsistent.
    void validate() const;
};

/// Trapezoid mass grid of n points on [m_lo, m_hi]; the packet at mass m
/// has the template's nodes with weights multiplied by η(m).
MassFamily build_mass_family(double m_lo, double m_hi, std::size_t n, const MassWeight& eta,
                             const std::vector<PacketNode>& nodes);

}  // namespace volkov
