#pragma once

// Dirac matrices in the standard Dirac representation, the light-cone
// nilpotents N± and projectors Π±, and the indefinite spin inner product.
//
// Spinor components are representation dependent; every scalar quantity
// built from spin_inner is not.

#include <complex>

#include <Eigen/Core>

namespace volkov {

using cplx = std::complex<double>;
using SpinMatrix = Eigen::Matrix<cplx, 4, 4>;
using Spinor = Eigen::Matrix<cplx, 4, 1>;

inline constexpr cplx I{0.0, 1.0};

/// γ^j, j = 0..3, with {γ^i, γ^j} = 2 η^{ij} and η = diag(1, -1, -1, -1).
/// Throws std::out_of_range for any other index.
const SpinMatrix& dirac_gamma(int j);

struct LightconeOperators {
    SpinMatrix n_plus;    // (γ⁰ + γ¹) / 2
    SpinMatrix n_minus;   // (γ⁰ - γ¹) / 2
    SpinMatrix pi_plus;   // N+ N-
    SpinMatrix pi_minus;  // N- N+
};

const LightconeOperators& lightcone_operators();

/// ψ† γ⁰ φ. Conjugate-linear in the first argument, signature (2, 2).
cplx spin_inner(const Spinor& psi, const Spinor& phi);

/// Adjoint with respect to spin_inner: γ⁰ X† γ⁰.
SpinMatrix spin_adjoint(const SpinMatrix& m);

/// γ²(k2 + a2) + γ³(k3 + a3). Squares to -((k2+a2)² + (k3+a3)²) and
/// anticommutes with γ⁰ and γ¹.
SpinMatrix transverse_slash(double k2, double k3, double a2, double a3);

inline SpinMatrix identity_matrix() { return SpinMatrix::Identity(); }

}  // namespace volkov
