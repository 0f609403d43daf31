#pragma once

// Momentum-space Green's functions of the separated Dirac system, the
// causal fundamental solution, the sign(u) signature operator and the
// kernel P_{k2,k3,u}(s, s̃) of the fermionic projector.
//
// Constant conventions (e = exp(-i Φ(s̃, s) / 4u), 𝒜̃ = 𝒜(s̃)):
//
//   quantity                      a                        b
//   retarded Green's function     -i/(2π)³ Θ(s-s̃) e        -(i/4u) 2/(2π)³ Θ(s-s̃) (𝒜̃+m) e
//   advanced Green's function     +i/(2π)³ Θ(s̃-s) e        +(i/4u) 2/(2π)³ Θ(s̃-s) (𝒜̃+m) e
//   causal kernel (adv-ret)/2πi   e/(2π)⁴                   (𝒜̃+m) e / (2u (2π)⁴)
//   fermionic projector (u < 0)   e/(2π)⁴                   (𝒜̃+m) e / (2u (2π)⁴)
//
//   both Green's functions carry  N+ δ(s-s̃) · 2/((2π)³ 2u)  (kept symbolic)
//   null scalar product           (2π)⁴
//   spacetime pairing             ½ ds dl dy dz, giving 4π³ after l, y, z
//   smeared projector pairing     (2π)⁶/4
//
// Every kernel is assembled as
//   K = N- a + Π- b + (1/2u)(𝒜(s) + m)(N+ b + Π+ a).
// Θ(0) is taken as 1/2.

#include <iosfwd>
#include <vector>

#include "volkov/clifford.hpp"
#include "volkov/modes.hpp"
#include "volkov/potential.hpp"

namespace volkov {

enum class GreenKind { retarded, advanced };

struct GreenCoefficients {
    cplx a;
    SpinMatrix b;
    /// The distributional N+ δ(s - s̃) term is never sampled; it is
    /// reported here with its coefficient.
    bool has_delta_term = true;
    double delta_coefficient = 0.0;
};

GreenCoefficients green_ab(const ModeParams& mode, const PlaneWavePotential& pot, double s, double s_tilde,
                           GreenKind which);

/// N- a + Π- b + (1/2u)(𝒜(s) + m)(N+ b + Π+ a).
SpinMatrix assemble_kernel(const ModeParams& mode, const PlaneWavePotential& pot, double s, cplx a, const SpinMatrix& b);

/// Green's function without the δ term.
SpinMatrix green_kernel(const ModeParams& mode, const PlaneWavePotential& pot, double s, double s_tilde, GreenKind which);

/// (s^∨ - s^∧) / (2πi) in the separated picture.
SpinMatrix causal_fundamental_momentum(const ModeParams& mode, const PlaneWavePotential& pot, double s, double s_tilde);

/// ε(u) = u / |u|. Throws DomainError for u = 0.
int signature_sign(double u);

/// Scalar factor a(s, s̃) = e / (2π)⁴ of the projector kernel.
cplx fp_scalar_a(const ModeParams& mode, const PlaneWavePotential& pot, double s, double s_tilde);

/// P_{k2,k3,u}(s, s̃). Throws DomainError for u >= 0.
SpinMatrix fp_kernel_momentum(const ModeParams& mode, const PlaneWavePotential& pot, double s, double s_tilde);

struct KernelSample {
    double u, k2, k3, m;
    double s;
    double s_tilde;
    SpinMatrix value;
};

KernelSample sample_fp_kernel(const ModeParams& mode, const PlaneWavePotential& pot, double s, double s_tilde);

/// CSV rows (u, k2, k3, s, s_tilde, re_ij, im_ij for the 16 entries),
/// header included.
void write_kernel_csv(std::ostream& out, const std::vector<KernelSample>& samples);

// ---------------------------------------------------------------------------
// Mass oscillation

/// Trapezoid grid in s used for the regulated s-integral.
struct SGrid {
    double lo = -40.0;
    double hi = 40.0;
    double step = 0.1;
};

struct MassOscillationResult {
    std::vector<double> epsilons;
    std::vector<cplx> lhs_per_epsilon;
    cplx lhs;  // extrapolated to ε → 0
    cplx rhs;
    double gap = 0.0;           // |lhs - rhs|
    double relative_gap = 0.0;  // |lhs - rhs| / |rhs| (infinite when rhs = 0)
};

/// lhs = 4π³ Σ q ∫ e^{-εs²} ≺pχ_ψ(s) | pχ_φ(s)≻ ds with pχ = Σ_m w_m χ^m,
/// extrapolated to ε → 0 by polynomial (Richardson) extrapolation over
/// the given ε values; rhs = (2π)⁴ Σ_m w_m Σ q ε(u) ≺Π-χ_ψ^m(0) | γ⁰ Π-χ_φ^m(0)≻.
/// Throws DomainError for non-smooth mass weights and GridError when the
/// families do not share grids.
MassOscillationResult mass_oscillation_check(const MassFamily& psi, const MassFamily& phi, const PlaneWavePotential& pot,
                                             const std::vector<double>& epsilons = {0.1, 0.05, 0.025},
                                             const SGrid& grid = {}, unsigned workers = 1);

/// Polynomial extrapolation of f(ε) to ε = 0 through all given points.
cplx extrapolate_to_zero(const std::vector<double>& eps, const std::vector<cplx>& values);

// ---------------------------------------------------------------------------
// Smeared pairing

/// Momentum-space test function at one (u, k2, k3) node:
/// φ̂(s) = spinor · exp(-(s - center)² / 2 width²).
struct SmearNode {
    double u;
    double k2;
    double k3;
    double quad_weight;
    Spinor spinor;
    double center;
    double width;
};

struct SmearProfile {
    double mass = 1.0;
    std::vector<SmearNode> nodes;
};

/// ⟨φ | P ψ⟩ = (2π)⁶/4 Σ q ∫∫ φ̂(s)† γ⁰ P(s, s̃) ψ̂(s̃) ds ds̃ over nodes with
/// u < 0. The double integral uses trapezoid grids over ±10 widths of each
/// profile with `points_per_width` points per width, refined so that the
/// kernel phase is resolved. Throws GridError for mismatched grids and
/// DomainError for u >= 0.
cplx fp_pair_smeared(const SmearProfile& phi, const SmearProfile& psi, const PlaneWavePotential& pot,
                     int points_per_width = 8, unsigned workers = 1);

}  // namespace volkov
