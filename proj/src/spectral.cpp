#include "volkov/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <ostream>

#include <fftw3.h>
#include <fmt/format.h>

#include "volkov/error.hpp"
#include "volkov/parallel.hpp"
#include "volkov/projector.hpp"
#include "volkov/quadrature.hpp"

namespace volkov {

double bessel_j(int n, double x) {
    const int an = std::abs(n);
    double v = std::cyl_bessel_j(static_cast<double>(an), std::abs(x));
    // J_{-n} = (-1)^n J_n and J_n(-x) = (-1)^n J_n(x).
    if (n < 0 && (an % 2) == 1) v = -v;
    if (x < 0.0 && (an % 2) == 1) v = -v;
    return v;
}

double sideband_carrier(const ModeParams& mode, double lambda) {
    return (mode.k2 * mode.k2 + mode.k3 * mode.k3 + 0.5 * lambda * lambda + mode.m * mode.m) / (4.0 * mode.u);
}

std::vector<SpectrumLine> harmonic_sidebands_analytic(const ModeParams& mode, double lambda, double omega, int n_max) {
    if (n_max < 0) throw DomainError("sidebands: n_max must be nonnegative");
    if (omega == 0.0 || !std::isfinite(omega)) throw DomainError("sidebands: frequency must be nonzero");
    const double z1 = mode.k2 * lambda / (2.0 * omega * mode.u);
    const double z2 = lambda * lambda / (16.0 * omega * mode.u);
    const double v0 = sideband_carrier(mode, lambda);
    // J_k(z) is negligible once |k| exceeds |z| by a few tens.
    const int reach = std::max(n_max, 0) + static_cast<int>(std::ceil(std::abs(z1) + 2.0 * std::abs(z2))) + 30;

    std::vector<SpectrumLine> lines;
    for (int n = -n_max; n <= n_max; ++n) {
        std::vector<double> terms;
        for (int n2 = -reach; n2 <= reach; ++n2) terms.push_back(bessel_j(n - 2 * n2, z1) * bessel_j(n2, z2));
        lines.push_back({n, v0 + n * omega, cplx(compensated_sum(terms), 0.0), 0.0});
    }
    return lines;
}

// ---------------------------------------------------------------------------
// Windows

WindowFunction::WindowFunction(Kind k, double a, double b) : kind_(k), a_(a), b_(b) {
    if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("window parameters must be finite");
}

WindowFunction WindowFunction::gaussian(double center, double width) {
    if (!(width > 0.0)) throw DomainError("Gaussian window width must be positive");
    return {Kind::gaussian, center, width};
}

WindowFunction WindowFunction::hann(double lo, double hi) {
    if (!(hi > lo)) throw DomainError("Hann window needs lo < hi");
    return {Kind::hann, lo, hi};
}

WindowFunction WindowFunction::bump(double center, double half_width) {
    if (!(half_width > 0.0)) throw DomainError("bump window half-width must be positive");
    return {Kind::bump, center, half_width};
}

double WindowFunction::operator()(double s) const {
    switch (kind_) {
        case Kind::gaussian: {
            const double d = (s - a_) / b_;
            return std::exp(-0.5 * d * d);
        }
        case Kind::hann: {
            if (s < a_ || s > b_) return 0.0;
            const double t = (s - a_) / (b_ - a_);
            return 0.5 * (1.0 - std::cos(2.0 * M_PI * t));
        }
        case Kind::bump: return smooth_bump(s, a_ - b_, a_ + b_);
    }
    return 0.0;
}

std::pair<double, double> WindowFunction::support() const {
    switch (kind_) {
        case Kind::gaussian: return {a_ - 12.0 * b_, a_ + 12.0 * b_};
        case Kind::hann: return {a_, b_};
        case Kind::bump: return {a_ - b_, a_ + b_};
    }
    return {0.0, 0.0};
}

// ---------------------------------------------------------------------------
// Kernel trace and FFT lines

KernelTrace sample_kernel_trace(const ModeParams& mode, const PlaneWavePotential& pot, double s_tilde, double s0,
                                double step, std::size_t count, unsigned workers) {
    if (!(mode.u < 0.0)) throw DomainError("kernel trace: the projector kernel needs u < 0");
    if (!(step > 0.0) || count == 0) throw GridError("kernel trace: need a positive step and at least one sample");
    KernelTrace t{s0, step, std::vector<cplx>(count)};
    parallel_for(count, workers, [&](std::size_t j) {
        t.values[j] = fp_scalar_a(mode, pot, s0 + step * static_cast<double>(j), s_tilde);
    });
    return t;
}

namespace {

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

std::vector<cplx> forward_fft(const std::vector<cplx>& in) {
    const int n = static_cast<int>(in.size());
    std::vector<cplx> out(in.size());
    std::vector<cplx> buf = in;
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(buf.data()), reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

}  // namespace

std::vector<SpectrumLine> spectrum_fft(const KernelTrace& trace, const WindowFunction& window,
                                       const SpectrumRequest& request) {
    const std::size_t n = trace.values.size();
    const double h = trace.step;
    if (n < 16 || !(h > 0.0)) throw GridError("spectrum: need at least 16 samples on a positive step");
    if (request.pad < 1) throw GridError("spectrum: padding factor must be at least 1");
    if (request.n_max < 0) throw DomainError("spectrum: n_max must be nonnegative");

    double v_max = std::abs(request.carrier);
    for (int k = -request.n_max; k <= request.n_max; ++k)
        v_max = std::max(v_max, std::abs(request.carrier + k * request.spacing));
    if (M_PI / h <= v_max)
        throw GridError(fmt::format("spectrum: step {} undersamples |v| = {} (Nyquist limit {})", h, v_max, M_PI / h));
    if (request.spacing != 0.0) {
        const double span = static_cast<double>(n) * h;
        const double needed = request.min_periods * 2.0 * M_PI / std::abs(request.spacing);
        if (span < needed)
            throw GridError(fmt::format("spectrum: span {} is shorter than {} periods ({})", span, request.min_periods, needed));
    }

    std::vector<double> w(n);
    std::vector<cplx> x(n);
    for (std::size_t j = 0; j < n; ++j) {
        w[j] = window(trace.s0 + h * static_cast<double>(j));
        x[j] = w[j] * trace.values[j];
    }
    const double gain = compensated_sum(w);
    if (!(gain > 0.0)) throw GridError("spectrum: window vanishes on the sampled range");

    const std::size_t m = n * static_cast<std::size_t>(request.pad);
    std::vector<cplx> padded(m, cplx(0.0));
    std::copy(x.begin(), x.end(), padded.begin());
    const std::vector<cplx> spec = forward_fft(padded);
    std::vector<double> mag(m);
    for (std::size_t k = 0; k < m; ++k) mag[k] = std::abs(spec[k]);
    const double peak_max = *std::max_element(mag.begin(), mag.end());
    const double bin = 2.0 * M_PI / (static_cast<double>(m) * h);

    std::vector<SpectrumLine> lines;
    for (std::size_t k = 0; k < m; ++k) {
        const double left = mag[(k + m - 1) % m];
        const double right = mag[(k + 1) % m];
        if (!(mag[k] > left && mag[k] >= right) || mag[k] < request.threshold * peak_max) continue;
        if (!(left > 0.0) || !(right > 0.0)) continue;
        const double a = std::log(left), b = std::log(mag[k]), c = std::log(right);
        const double curv = a - 2.0 * b + c;
        const double delta = curv < 0.0 ? 0.5 * (a - c) / curv : 0.0;
        double kk = static_cast<double>(k) + delta;
        if (kk > 0.5 * static_cast<double>(m)) kk -= static_cast<double>(m);
        // Σ x e^{-2πijk/M} picks up e^{+2πijk/M}, i.e. e^{-ivs} with v = -2πk/(M h).
        const double v = -kk * bin;

        std::vector<cplx> dtft(n);
        for (std::size_t j = 0; j < n; ++j) dtft[j] = x[j] * std::exp(I * (v * (trace.s0 + h * static_cast<double>(j))));
        SpectrumLine line;
        line.frequency = v;
        line.amplitude = compensated_sum(dtft) / gain;
        line.width = curv < 0.0 ? 2.0 * std::sqrt(2.0 * std::log(2.0) / -curv) * bin : 0.0;
        line.index = request.spacing != 0.0 ? static_cast<int>(std::lround((v - request.carrier) / request.spacing)) : 0;
        lines.push_back(line);
    }
    std::sort(lines.begin(), lines.end(), [](const SpectrumLine& p, const SpectrumLine& q) {
        return p.frequency < q.frequency;
    });
    return lines;
}

// ---------------------------------------------------------------------------
// Windowed transform

std::vector<cplx> windowed_phase_transform(const ModeParams& mode, const PlaneWavePotential& pot,
                                           const WindowFunction& window, const std::vector<double>& v_grid,
                                           unsigned workers) {
    for (double v : v_grid)
        if (!std::isfinite(v)) throw DomainError("windowed transform: frequencies must be finite");
    const auto [lo, hi] = window.support();
    pot.check_domain(lo);
    pot.check_domain(hi);
    const PhaseQuery q = mode.phase_query();

    double rate = 0.0;
    for (int i = 0; i <= 512; ++i) rate = std::max(rate, phase_integrand(pot, q, lo + (hi - lo) * i / 512.0));
    rate /= 4.0 * std::abs(mode.u);
    double v_abs = 0.0;
    for (double v : v_grid) v_abs = std::max(v_abs, std::abs(v));
    const double width = 2.0 * M_PI / (8.0 * std::max({v_abs, rate, 1.0}));

    // One panel layout for every v; the phase factor is evaluated once per node.
    const auto panels = static_cast<std::size_t>(std::ceil((hi - lo) / width));
    const double ph = (hi - lo) / static_cast<double>(panels);
    const auto& rule = quadrature::legendre32();
    const std::size_t per = rule.nodes.size();
    std::vector<double> nodes(panels * per);
    std::vector<cplx> g(panels * per);
    parallel_for(panels, workers, [&](std::size_t p) {
        const double mid = lo + ph * (static_cast<double>(p) + 0.5);
        for (std::size_t k = 0; k < per; ++k) {
            const double s = mid + 0.5 * ph * rule.nodes[k];
            nodes[p * per + k] = s;
            g[p * per + k] = 0.5 * ph * rule.weights[k] * window(s) * phase_factor(mode, pot, 0.0, s);
        }
    });

    std::vector<cplx> out(v_grid.size());
    parallel_for(v_grid.size(), workers, [&](std::size_t i) {
        const double v = v_grid[i];
        std::vector<cplx> panel_sums(panels);
        for (std::size_t p = 0; p < panels; ++p) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < per; ++k) acc += g[p * per + k] * std::exp(I * (v * nodes[p * per + k]));
            panel_sums[p] = acc;
        }
        out[i] = compensated_sum(panel_sums);
    });
    return out;
}

double plancherel_target(const WindowFunction& window) {
    const auto [lo, hi] = window.support();
    const double l2 = quadrature::integrate_panels(
        [&](double s) {
            const double f = window(s);
            return f * f;
        },
        lo, hi, (hi - lo) / 64.0);
    return 2.0 * M_PI * l2;
}

double l2_trapezoid(const std::vector<double>& v_grid, const std::vector<cplx>& values) {
    if (v_grid.size() != values.size() || v_grid.size() < 2) throw DomainError("l2_trapezoid: need matching grids");
    std::vector<double> terms;
    for (std::size_t i = 0; i + 1 < v_grid.size(); ++i)
        terms.push_back(0.5 * (v_grid[i + 1] - v_grid[i]) * (std::norm(values[i]) + std::norm(values[i + 1])));
    return compensated_sum(terms);
}

double l2_fraction_above(const std::vector<double>& v_grid, const std::vector<cplx>& values, double threshold) {
    const double total = l2_trapezoid(v_grid, values);
    std::vector<double> v, keep_v;
    std::vector<cplx> keep;
    for (std::size_t i = 0; i < v_grid.size(); ++i)
        if (v_grid[i] > threshold) {
            keep_v.push_back(v_grid[i]);
            keep.push_back(values[i]);
        }
    if (keep.size() < 2 || !(total > 0.0)) return 0.0;
    return l2_trapezoid(keep_v, keep) / total;
}

void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumLine>& lines) {
    out << "n,v_n,re_amp,im_amp,abs_amp\n";
    for (const auto& l : lines)
        out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g}\n", l.index, l.frequency, l.amplitude.real(),
                           l.amplitude.imag(), std::abs(l.amplitude));
}

void write_transform_csv(std::ostream& out, const std::vector<double>& v, const std::vector<cplx>& values) {
    out << "v,re_F,im_F\n";
    for (std::size_t i = 0; i < v.size(); ++i)
        out << fmt::format("{:.17g},{:.17g},{:.17g}\n", v[i], values[i].real(), values[i].imag());
}

}  // namespace volkov
