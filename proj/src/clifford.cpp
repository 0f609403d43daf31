#include "volkov/clifford.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace volkov {
namespace {

std::array<SpinMatrix, 4> make_gammas() {
    std::array<SpinMatrix, 4> g;
    for (auto& m : g) m.setZero();

    g[0].diagonal() << 1.0, 1.0, -1.0, -1.0;

    // γ^k = [[0, σ_k], [-σ_k, 0]]
    Eigen::Matrix2cd sigma[3];
    sigma[0] << 0.0, 1.0, 1.0, 0.0;
    sigma[1] << 0.0, -I, I, 0.0;
    sigma[2] << 1.0, 0.0, 0.0, -1.0;
    for (int k = 0; k < 3; ++k) {
        g[k + 1].block<2, 2>(0, 2) = sigma[k];
        g[k + 1].block<2, 2>(2, 0) = -sigma[k];
    }
    return g;
}

const std::array<SpinMatrix, 4>& gammas() {
    static const std::array<SpinMatrix, 4> g = make_gammas();
    return g;
}

}  // namespace

const SpinMatrix& dirac_gamma(int j) {
    if (j < 0 || j > 3) throw std::out_of_range("dirac_gamma: index " + std::to_string(j) + " not in 0..3");
    return gammas()[static_cast<std::size_t>(j)];
}

const LightconeOperators& lightcone_operators() {
    static const LightconeOperators ops = [] {
        LightconeOperators o;
        o.n_plus = 0.5 * (dirac_gamma(0) + dirac_gamma(1));
        o.n_minus = 0.5 * (dirac_gamma(0) - dirac_gamma(1));
        o.pi_plus = o.n_plus * o.n_minus;
        o.pi_minus = o.n_minus * o.n_plus;
        return o;
    }();
    return ops;
}

cplx spin_inner(const Spinor& psi, const Spinor& phi) {
    // γ⁰ is diagonal in this representation.
    return std::conj(psi(0)) * phi(0) + std::conj(psi(1)) * phi(1) - std::conj(psi(2)) * phi(2) -
           std::conj(psi(3)) * phi(3);
}

SpinMatrix spin_adjoint(const SpinMatrix& m) {
    const SpinMatrix& g0 = dirac_gamma(0);
    return g0 * m.adjoint() * g0;
}

SpinMatrix transverse_slash(double k2, double k3, double a2, double a3) {
    return dirac_gamma(2) * cplx(k2 + a2) + dirac_gamma(3) * cplx(k3 + a3);
}

}  // namespace volkov
