#pragma once

// Frequency content of the projector kernel in s: the closed-form sideband
// lattice of a harmonic wave, windowed FFT line extraction, and the
// windowed transform F(v) = ∫ f(s) e^{-iΦ(0,s)/4u} e^{ivs} ds.
//
// Convention: a component e^{-ivs} is a line at frequency v. The kernel's
// scalar factor e^{-iΦ(s̃,s)/4u} therefore sits at v₀ + nΩ.

#include <iosfwd>
#include <utility>
#include <vector>

#include "volkov/clifford.hpp"
#include "volkov/decay_fit.hpp"
#include "volkov/modes.hpp"
#include "volkov/potential.hpp"

namespace volkov {

struct SpectrumLine {
    int index = 0;
    double frequency = 0.0;
    cplx amplitude;
    double width = 0.0;  // FWHM in v, when measured from a spectrum
};

/// J_n(x) for integer n and real x of either sign.
double bessel_j(int n, double x);

/// Carrier (k2² + k3² + λ²/2 + m²) / 4u of a harmonic wave of amplitude λ.
double sideband_carrier(const ModeParams& mode, double lambda);

/// Lines n = -n_max..n_max at v₀ + nΩ with c_n = Σ_{n₁+2n₂=n} J_{n₁}(z₁) J_{n₂}(z₂),
/// z₁ = k2λ/(2Ωu), z₂ = λ²/(16Ωu). Throws DomainError for n_max < 0 or Ω = 0.
std::vector<SpectrumLine> harmonic_sidebands_analytic(const ModeParams& mode, double lambda, double omega, int n_max);

class WindowFunction {
public:
    enum class Kind { gaussian, hann, bump };

    static WindowFunction gaussian(double center, double width);
    /// Raised cosine on [lo, hi].
    static WindowFunction hann(double lo, double hi);
    /// exp(-1/(1-t²)), t = (s - center)/half_width; C∞ with compact support.
    static WindowFunction bump(double center, double half_width);

    double operator()(double s) const;
    Kind kind() const { return kind_; }
    /// Interval outside which the window is zero, or below e^{-72} of its
    /// peak for Gaussians.
    std::pair<double, double> support() const;

private:
    WindowFunction(Kind k, double a, double b);

    Kind kind_;
    double a_;
    double b_;
};

/// Uniformly sampled scalar kernel factor a(s, s̃) at fixed s̃, s = s0 + j·step.
struct KernelTrace {
    double s0 = 0.0;
    double step = 0.0;
    std::vector<cplx> values;
};

KernelTrace sample_kernel_trace(const ModeParams& mode, const PlaneWavePotential& pot, double s_tilde, double s0,
                                double step, std::size_t count, unsigned workers = 1);

struct SpectrumRequest {
    double carrier = 0.0;  // expected v₀
    double spacing = 0.0;  // expected Ω; 0 for a single line
    int n_max = 0;         // highest sideband that must be resolvable
    int pad = 4;           // zero-padding factor
    double threshold = 1e-9;  // peaks below threshold · max are ignored
    double min_periods = 16.0;
};

/// Windowed, zero-padded FFT of the trace. Every local maximum of the
/// magnitude above the threshold becomes a line: frequency and FWHM from a
/// three-bin log-parabolic fit, complex amplitude from the windowed
/// transform at the refined frequency divided by the window's coherent
/// gain Σ f(s_j). Indices are round((v - carrier) / spacing).
/// Throws GridError for a Nyquist violation (π/step <= max |v₀ + nΩ|) or a
/// span shorter than min_periods periods 2π/spacing.
std::vector<SpectrumLine> spectrum_fft(const KernelTrace& trace, const WindowFunction& window,
                                       const SpectrumRequest& request);

/// F(v) on the given grid by order-32 Gauss-Legendre panels of width at
/// most 2π / (8 max(|v|, phase rate)).
std::vector<cplx> windowed_phase_transform(const ModeParams& mode, const PlaneWavePotential& pot,
                                           const WindowFunction& window, const std::vector<double>& v_grid,
                                           unsigned workers = 1);

/// 2π ∫ |f(s)|² ds, the Plancherel value of ∫ |F(v)|² dv.
double plancherel_target(const WindowFunction& window);

/// Trapezoid ∫ |F|² dv on a uniform grid.
double l2_trapezoid(const std::vector<double>& v_grid, const std::vector<cplx>& values);

/// Share of ∫ |F|² dv carried by v > threshold.
double l2_fraction_above(const std::vector<double>& v_grid, const std::vector<cplx>& values, double threshold);

/// CSV with header (n, v_n, re_amp, im_amp, abs_amp).
void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumLine>& lines);

/// CSV with header (v, re_F, im_F).
void write_transform_csv(std::ostream& out, const std::vector<double>& v, const std::vector<cplx>& values);

}  // namespace volkov
