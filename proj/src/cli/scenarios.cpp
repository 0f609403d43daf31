#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "volkov/cli.hpp"
#include "volkov/error.hpp"
#include "volkov/parallel.hpp"

namespace volkov::cli {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

std::string num(double x) { return fmt::format("{:.17g}", x); }

class Csv {
public:
    explicit Csv(std::string file) : table_{std::move(file), {}} {}
    void header(const std::vector<std::string>& cols) { line(cols); }
    void row(const std::vector<std::string>& cells) { line(cells); }
    Table done() { return std::move(table_); }

private:
    void line(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) table_.body += ',';
            table_.body += cells[i];
        }
        table_.body += '\n';
    }
    Table table_;
};

Assertion assert_at_most(std::string name, std::string anchor, double measured, double tolerance) {
    return {std::move(name), std::move(anchor), measured, tolerance, "<=", measured <= tolerance};
}

Assertion assert_at_least(std::string name, std::string anchor, double measured, double tolerance) {
    return {std::move(name), std::move(anchor), measured, tolerance, ">=", measured >= tolerance};
}

Assertion assert_below(std::string name, std::string anchor, double measured, double tolerance) {
    return {std::move(name), std::move(anchor), measured, tolerance, "<", measured < tolerance};
}

Assertion assert_equal(std::string name, std::string anchor, double measured, double expected) {
    return {std::move(name), std::move(anchor), measured, expected, "==", measured == expected};
}

/// Seeded draws. All randomness is consumed serially before any parallel
/// evaluation, so the outcome does not depend on the worker count.
class Draws {
public:
    explicit Draws(std::uint64_t seed) : gen_(seed) {}
    double uniform(double a, double b) { return a == b ? a : std::uniform_real_distribution<double>(a, b)(gen_); }
    double uniform(const Range& r) { return uniform(r.lo, r.hi); }
    double signed_magnitude(const Range& r) {
        const double mag = uniform(r);
        return uniform(0.0, 1.0) < 0.5 ? -mag : mag;
    }
    cplx complex_unit_box() { return {uniform(-1, 1), uniform(-1, 1)}; }
    Spinor pi_minus_spinor() {
        Spinor v;
        for (int i = 0; i < 4; ++i) v[i] = complex_unit_box();
        return ModeAmplitude::project(v).chi0;
    }

private:
    std::mt19937_64 gen_;
};

std::vector<PacketNode> random_nodes(const AxisSpec& u, const AxisSpec& k2, const AxisSpec& k3, Draws& draws) {
    return tensor_grid(
        u.axis(), k2.axis(), k3.axis(), [&](double, double, double) { return draws.complex_unit_box(); },
        [&](double, double, double) { return draws.pi_minus_spinor(); });
}

double relative(double gap, double scale) { return scale > 0.0 ? gap / scale : (gap == 0.0 ? 0.0 : inf); }

// ---------------------------------------------------------------------------

ScenarioResult dirac_residual_scenario(const ScenarioConfig& cfg, const DiracResidualParams& p, unsigned workers) {
    ScenarioResult out;
    out.anchor = "closed-form plane-wave modes solve the Dirac equation";
    struct Sample {
        ModeParams mode;
        ModeAmplitude amp;
        NullPoint point;
    };
    Draws draws(cfg.seed);
    std::vector<Sample> samples;
    samples.reserve(p.modes);
    for (std::size_t i = 0; i < p.modes; ++i) {
        const double k2 = draws.uniform(p.k), k3 = draws.uniform(p.k);
        const double u = draws.signed_magnitude(p.u_magnitude);
        const double m = draws.uniform(p.mass);
        const ModeAmplitude amp(draws.pi_minus_spinor());
        const NullPoint pt{draws.uniform(p.point), draws.uniform(p.point), draws.uniform(p.point), draws.uniform(p.point)};
        samples.push_back({ModeParams(k2, k3, u, m), amp, pt});
    }
    std::vector<double> residual(samples.size()), rel(samples.size());
    parallel_for(samples.size(), workers, [&](std::size_t i) {
        const auto& s = samples[i];
        residual[i] = dirac_residual(s.amp, s.mode, cfg.potential, s.point);
        rel[i] = relative(residual[i], mode_wavefunction(s.amp, s.mode, cfg.potential, s.point).norm());
    });

    Csv csv("residuals.csv");
    csv.header({"index", "k2", "k3", "u", "m", "s", "l", "y", "z", "residual", "relative_residual"});
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        csv.row({std::to_string(i), num(s.mode.k2), num(s.mode.k3), num(s.mode.u), num(s.mode.m), num(s.point.s),
                 num(s.point.l), num(s.point.y), num(s.point.z), num(residual[i]), num(rel[i])});
    }
    out.tables.push_back(csv.done());
    const double worst = *std::max_element(rel.begin(), rel.end());
    out.assertions.push_back(assert_at_most("max relative Dirac residual", out.anchor, worst, p.relative_residual));
    out.report = {{"modes", p.modes}, {"potential", cfg.potential.kind_name()}, {"max_relative_residual", worst}};
    return out;
}

ScenarioResult null_product_scenario(const ScenarioConfig& cfg, const NullProductParams& p, unsigned workers) {
    ScenarioResult out;
    out.anchor = "scalar product on the null surfaces s = const does not depend on s";
    Draws draws(cfg.seed);
    Csv csv("null_products.csv");
    csv.header({"packet", "s", "re", "im", "relative_deviation"});
    double worst = 0.0;
    for (std::size_t k = 0; k < p.packets; ++k) {
        WavePacket psi{p.mass, random_nodes(p.u, p.k2, p.k3, draws)};
        WavePacket phi{p.mass, random_nodes(p.u, p.k2, p.k3, draws)};
        std::vector<cplx> values;
        for (double s : p.s_values) values.push_back(null_scalar_product(psi, phi, cfg.potential, s, workers));
        const cplx ref = values.front();
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double dev = relative(std::abs(values[i] - ref), std::abs(ref));
            worst = std::max(worst, dev);
            csv.row({std::to_string(k), num(p.s_values[i]), num(values[i].real()), num(values[i].imag()), num(dev)});
        }
    }
    out.tables.push_back(csv.done());
    out.assertions.push_back(assert_at_most("max relative deviation across s", out.anchor, worst, p.relative_deviation));
    out.report = {{"packets", p.packets}, {"surfaces", p.s_values.size()}, {"max_relative_deviation", worst}};
    return out;
}

ScenarioResult mass_pairing_scenario(const ScenarioConfig& cfg, const MassPairingParams& p, unsigned workers) {
    ScenarioResult out;
    out.anchor = "pairing of modes with masses m and m' on a null surface reduces to data at s = 0";
    struct Sample {
        PlaneWavePotential pot;
        ModeAmplitude a, b;
        double k2, k3, u, m, mp, s;
    };
    Draws draws(cfg.seed);
    std::vector<Sample> samples;
    samples.reserve(p.draws);
    for (std::size_t i = 0; i < p.draws; ++i) {
        PlaneWavePotential pot = cfg.potential;
        if (p.amplitude) {
            const auto* h = cfg.potential.as<PlaneWavePotential::Harmonic>();
            pot = PlaneWavePotential::harmonic(draws.uniform(*p.amplitude), h->frequency);
        }
        const ModeAmplitude a(draws.pi_minus_spinor()), b(draws.pi_minus_spinor());
        const double k2 = draws.uniform(p.k), k3 = draws.uniform(p.k);
        const double u = draws.signed_magnitude(p.u_magnitude);
        const double m = draws.uniform(p.mass), mp = draws.uniform(p.mass);
        samples.push_back({pot, a, b, k2, k3, u, m, mp, draws.uniform(p.s)});
    }
    std::vector<PairingSides> sides(samples.size(), PairingSides{});
    parallel_for(samples.size(), workers, [&](std::size_t i) {
        const auto& s = samples[i];
        sides[i] = mass_pairing_identity(s.a, s.b, s.k2, s.k3, s.u, s.m, s.mp, s.pot, s.s);
    });

    Csv csv("mass_pairing.csv");
    csv.header({"draw", "amplitude", "m", "m_prime", "k2", "k3", "u", "s", "re_lhs", "im_lhs", "re_rhs", "im_rhs",
                "relative_gap"});
    double worst = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        const double gap = relative(std::abs(sides[i].lhs - sides[i].rhs), std::abs(sides[i].rhs));
        worst = std::max(worst, gap);
        const auto* h = s.pot.as<PlaneWavePotential::Harmonic>();
        csv.row({std::to_string(i), num(h ? h->amplitude : 0.0), num(s.m), num(s.mp), num(s.k2), num(s.k3), num(s.u),
                 num(s.s), num(sides[i].lhs.real()), num(sides[i].lhs.imag()), num(sides[i].rhs.real()),
                 num(sides[i].rhs.imag()), num(gap)});
    }
    out.tables.push_back(csv.done());
    out.assertions.push_back(assert_at_most("max relative gap between the two sides", out.anchor, worst, p.relative_gap));
    out.report = {{"draws", p.draws}, {"max_relative_gap", worst}};
    return out;
}

ScenarioResult mass_oscillation_scenario(const ScenarioConfig& cfg, const MassOscillationParams& p, unsigned workers) {
    ScenarioResult out;
    out.anchor = "mass oscillation: the regulated spacetime pairing equals the sign(u)-weighted null product";
    Draws draws(cfg.seed);
    const auto nodes = random_nodes(p.u, p.k2, p.k3, draws);
    const MassWeight eta = p.weight.value_or(MassWeight::bump(p.interval.lo, p.interval.hi));
    const MassFamily fam = build_mass_family(p.interval.lo, p.interval.hi, p.masses, eta, nodes);
    const MassOscillationResult diag = mass_oscillation_check(fam, fam, cfg.potential, p.epsilons, p.s_grid, workers);

    Csv csv("mass_oscillation.csv");
    csv.header({"case", "epsilon", "re_lhs", "im_lhs", "re_rhs", "im_rhs"});
    auto emit = [&](const std::string& name, const MassOscillationResult& r) {
        for (std::size_t i = 0; i < r.epsilons.size(); ++i)
            csv.row({name, num(r.epsilons[i]), num(r.lhs_per_epsilon[i].real()), num(r.lhs_per_epsilon[i].imag()),
                     num(r.rhs.real()), num(r.rhs.imag())});
        csv.row({name, num(0.0), num(r.lhs.real()), num(r.lhs.imag()), num(r.rhs.real()), num(r.rhs.imag())});
    };
    emit("diagonal", diag);
    out.assertions.push_back(assert_at_most("relative gap after extrapolation to zero regulator", out.anchor,
                                            diag.relative_gap, p.relative_gap));
    out.report = {{"nodes", nodes.size()},
                  {"masses", p.masses},
                  {"relative_gap", diag.relative_gap},
                  {"rhs", io::complex_to_json(diag.rhs)},
                  {"lhs", io::complex_to_json(diag.lhs)}};

    if (p.disjoint_check) {
        const double q = 0.25 * (p.interval.hi - p.interval.lo);
        const auto low = build_mass_family(p.interval.lo, p.interval.hi, p.masses,
                                           MassWeight::bump(p.interval.lo, p.interval.lo + q), nodes);
        const auto high = build_mass_family(p.interval.lo, p.interval.hi, p.masses,
                                            MassWeight::bump(p.interval.hi - q, p.interval.hi), nodes);
        const MassOscillationResult r = mass_oscillation_check(low, high, cfg.potential, p.epsilons, p.s_grid, workers);
        emit("disjoint", r);
        const double ratio = relative(std::max(std::abs(r.lhs), std::abs(r.rhs)), std::abs(diag.rhs));
        out.assertions.push_back(assert_at_most("disjoint mass supports relative to the diagonal case",
                                                "pairing of disjoint mass supports vanishes", ratio, p.disjoint_ratio));
        out.report["disjoint_ratio"] = ratio;
    }
    out.tables.push_back(csv.done());
    return out;
}

ScenarioResult decay_scan_scenario(const ScenarioConfig& cfg, const DecayScanParams& p, unsigned workers) {
    ScenarioResult out;
    out.anchor = "wavepackets with smooth momentum weights decay rapidly along the null direction";
    const Spinor c = ModeAmplitude::project(Spinor::Ones()).chi0;
    WavePacket packet;
    packet.mass = p.mass;
    packet.nodes = tensor_grid(
        p.u.axis(), p.k2.axis(), p.k3.axis(),
        [&](double u, double, double) {
            const double d = (u - p.weight_center) / p.weight_width;
            return cplx(smooth_bump(u, p.u.lo, p.u.hi) * std::exp(-0.5 * d * d));
        },
        [&](double, double, double) { return c; });
    const std::vector<double> ls = p.l.axis().nodes;
    const DecayReport rep = null_decay_scan(packet, cfg.potential, p.s_values, ls, p.min_order, workers);

    Csv mags("decay_magnitudes.csv");
    mags.header({"s", "l", "magnitude"});
    const std::size_t n = rep.l_values.size();
    for (std::size_t r = 0; r < rep.rows.size(); ++r) {
        const auto& mag = rep.magnitudes[r];
        for (std::size_t i = n; i-- > 0;) mags.row({num(rep.rows[r].s), num(-rep.l_values[i]), num(mag[n + i])});
        for (std::size_t i = 0; i < n; ++i) mags.row({num(rep.rows[r].s), num(rep.l_values[i]), num(mag[i])});
    }
    Csv fits("decay_fits.csv");
    fits.header({"case", "s", "order_positive_l", "order_negative_l", "order", "peak"});
    for (const auto& row : rep.rows)
        fits.row({"packet", num(row.s), num(row.positive_l.order), num(row.negative_l.order), num(row.order),
                  num(row.peak)});
    out.assertions.push_back(assert_at_least("minimum fitted decay order over s", out.anchor, rep.min_order, p.min_order));
    out.report = {{"nodes", packet.nodes.size()}, {"min_order", rep.min_order}, {"decaying", rep.decaying}};

    if (p.single_mode_u) {
        WavePacket single;
        single.mass = p.mass;
        single.nodes = {{*p.single_mode_u, p.k2.lo, p.k3.lo, 1.0, 1.0, c}};
        const DecayReport flat = null_decay_scan(single, cfg.potential, p.s_values, ls, p.min_order, workers);
        for (const auto& row : flat.rows)
            fits.row({"single_mode", num(row.s), num(row.positive_l.order), num(row.negative_l.order), num(row.order),
                      num(row.peak)});
        out.assertions.push_back(assert_below("single mode is flagged as non-decaying",
                                              "a single plane-wave mode does not decay along the null direction",
                                              flat.min_order, p.min_order));
        out.report["single_mode_order"] = flat.min_order;
    }
    out.tables.push_back(mags.done());
    out.tables.push_back(fits.done());
    return out;
}

double max_abs(const SpinMatrix& m) { return m.cwiseAbs().maxCoeff(); }

ScenarioResult fp_kernel_scenario(const ScenarioConfig& cfg, const FpKernelParams& p, unsigned workers) {
    ScenarioResult out;
    out.anchor = "fermionic projector kernel equals minus sign(u) times the causal fundamental solution";
    struct Job {
        ModeParams mode;
        double s, st;
    };
    std::vector<Job> jobs;
    for (double u : p.u.axis().nodes)
        for (double k2 : p.k2.axis().nodes)
            for (double k3 : p.k3.axis().nodes)
                for (double s : p.s_values)
                    for (double st : p.s_tilde_values) jobs.push_back({ModeParams(k2, k3, u, p.mass), s, st});

    std::vector<KernelSample> samples(jobs.size());
    std::vector<double> sign_dev(jobs.size()), adj_dev(jobs.size()), diag_dev(jobs.size());
    const double a_diag = 1.0 / std::pow(2 * M_PI, 4);
    parallel_for(jobs.size(), workers, [&](std::size_t i) {
        const auto& j = jobs[i];
        samples[i] = sample_fp_kernel(j.mode, cfg.potential, j.s, j.st);
        const SpinMatrix& pk = samples[i].value;
        const SpinMatrix k = causal_fundamental_momentum(j.mode, cfg.potential, j.s, j.st);
        const double scale = max_abs(pk);
        sign_dev[i] = relative(max_abs(pk + static_cast<double>(signature_sign(j.mode.u)) * k), scale);
        adj_dev[i] = relative(max_abs(spin_adjoint(pk) - fp_kernel_momentum(j.mode, cfg.potential, j.st, j.s)), scale);
        diag_dev[i] = std::abs(fp_scalar_a(j.mode, cfg.potential, j.s, j.s) - a_diag);
    });

    std::ostringstream body;
    write_kernel_csv(body, samples);
    out.tables.push_back({"kernel.csv", body.str()});
    const double sign_worst = *std::max_element(sign_dev.begin(), sign_dev.end());
    const double adj_worst = *std::max_element(adj_dev.begin(), adj_dev.end());
    const double diag_worst = *std::max_element(diag_dev.begin(), diag_dev.end());
    out.assertions.push_back(assert_at_most("kernel against minus sign(u) times the causal solution", out.anchor,
                                            sign_worst, p.relative_deviation));
    out.assertions.push_back(assert_at_most("spin-adjoint symmetry under exchange of s and s_tilde",
                                            "kernel is symmetric under the spin adjoint", adj_worst,
                                            p.relative_deviation));
    out.assertions.push_back(assert_at_most("scalar coefficient on the diagonal equals 1/(2 pi)^4",
                                            "normalization of the kernel on the diagonal", diag_worst, 0.0));
    out.report = {{"samples", samples.size()},
                  {"max_sign_deviation", sign_worst},
                  {"max_adjoint_deviation", adj_worst},
                  {"max_diagonal_deviation", diag_worst}};
    return out;
}

std::vector<SpectrumLine> measure_lines(const ModeParams& mode, const PlaneWavePotential& pot, const SidebandsParams& p,
                                        double carrier, double spacing, int n_max, double span_period,
                                        unsigned workers, double& bin) {
    const double len = p.periods * span_period;
    const auto count = static_cast<std::size_t>(std::llround(len / p.step));
    const KernelTrace trace = sample_kernel_trace(mode, pot, p.s_tilde, 0.0, p.step, count, workers);
    const auto window = WindowFunction::gaussian(0.5 * len, p.window_fraction * len);
    SpectrumRequest req;
    req.carrier = carrier;
    req.spacing = spacing;
    req.n_max = n_max;
    req.pad = p.pad;
    auto lines = spectrum_fft(trace, window, req);
    // Strip the kernel's constant factor (2π)^{-4} e^{iΦ(0,s̃)/4u}.
    const cplx ref = std::pow(2 * M_PI, -4) / phase_factor(mode, pot, 0.0, p.s_tilde);
    for (auto& l : lines) l.amplitude /= ref;
    bin = 2 * M_PI / (static_cast<double>(count) * p.pad * p.step);
    return lines;
}

ScenarioResult sidebands_scenario(const ScenarioConfig& cfg, const SidebandsParams& p, unsigned workers) {
    ScenarioResult out;
    out.anchor = "kernel spectrum in a periodic wave is a comb of Bessel-weighted sidebands";
    const auto* h = cfg.potential.as<PlaneWavePotential::Harmonic>();
    const ModeParams mode = p.mode.params();
    const double period = 2 * M_PI / std::abs(h->frequency);
    const double carrier = sideband_carrier(mode, h->amplitude);

    double bin = 0.0;
    const auto measured = measure_lines(mode, cfg.potential, p, carrier, h->frequency, p.n_max, period, workers, bin);
    const auto analytic = harmonic_sidebands_analytic(mode, h->amplitude, h->frequency, p.n_max);

    double freq_err = 0.0, amp_err = 0.0;
    for (const auto& a : analytic) {
        const auto it = std::find_if(measured.begin(), measured.end(), [&](const SpectrumLine& l) { return l.index == a.index; });
        if (it == measured.end()) {
            freq_err = amp_err = inf;
            continue;
        }
        freq_err = std::max(freq_err, std::abs(it->frequency - a.frequency) / bin);
        amp_err = std::max(amp_err, relative(std::abs(it->amplitude - a.amplitude), std::abs(a.amplitude)));
    }

    const double z = std::abs(mode.k2 * h->amplitude / (2 * h->frequency * mode.u)) +
                     std::abs(h->amplitude * h->amplitude / (16 * h->frequency * mode.u));
    const int reach = p.n_max + 40 + static_cast<int>(std::ceil(4 * z));
    std::vector<double> power;
    for (const auto& l : harmonic_sidebands_analytic(mode, h->amplitude, h->frequency, reach))
        power.push_back(std::norm(l.amplitude));
    const double parseval = std::abs(compensated_sum(power) - 1.0);

    // The same mode without the wave: a single line at (k2² + k3² + m²)/4u.
    double free_bin = 0.0;
    const double free_v = (mode.k2 * mode.k2 + mode.k3 * mode.k3 + mode.m * mode.m) / (4 * mode.u);
    const auto free_lines =
        measure_lines(mode, PlaneWavePotential::zero(), p, free_v, 0.0, 0, period, workers, free_bin);
    double free_err = inf;
    for (const auto& l : free_lines) free_err = std::min(free_err, std::abs(l.frequency - free_v) / free_bin);

    std::ostringstream fft_csv, bessel_csv, free_csv;
    write_spectrum_csv(fft_csv, measured);
    write_spectrum_csv(bessel_csv, analytic);
    write_spectrum_csv(free_csv, free_lines);
    out.tables.push_back({"sidebands.csv", fft_csv.str()});
    out.tables.push_back({"sidebands_bessel.csv", bessel_csv.str()});
    out.tables.push_back({"sidebands_free.csv", free_csv.str()});

    out.assertions.push_back(assert_at_most("line positions v0 + n Omega, in FFT bins", out.anchor, freq_err, p.frequency_bins));
    out.assertions.push_back(assert_at_most("relative amplitude error against the Bessel series", out.anchor, amp_err,
                                            p.amplitude_relative));
    out.assertions.push_back(assert_at_most("sum of squared sideband amplitudes minus one",
                                            "sideband amplitudes carry unit total power", parseval, p.parseval));
    out.assertions.push_back(assert_equal("lines in the spectrum without the wave",
                                          "free kernel has the single line 4uv = k2^2 + k3^2 + m^2",
                                          static_cast<double>(free_lines.size()), 1.0));
    out.assertions.push_back(assert_at_most("free line position, in FFT bins",
                                            "free kernel has the single line 4uv = k2^2 + k3^2 + m^2", free_err,
                                            p.frequency_bins));
    out.report = {{"carrier", carrier}, {"bin", bin}, {"lines_detected", measured.size()}};
    return out;
}

ScenarioResult wavefront_scenario(const ScenarioConfig& cfg, const WavefrontParams& p, unsigned workers) {
    ScenarioResult out;
    out.anchor = "windowed kernel transform decays rapidly for positive frequencies only";
    const ModeParams mode = p.mode.params();
    const auto [lo, hi] = p.window.support();
    if (!(p.v_step < 2 * M_PI / (hi - lo)))
        throw GridError(fmt::format("v grid step {} is not below 2 pi / window support ({}); the L2 sum is undersampled",
                                    p.v_step, 2 * M_PI / (hi - lo)));
    const auto count = static_cast<std::size_t>(std::floor((p.v_hi - p.v_lo) / p.v_step + 1e-9)) + 1;
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) v[i] = p.v_lo + p.v_step * static_cast<double>(i);
    const auto f = windowed_phase_transform(mode, cfg.potential, p.window, v, workers);

    auto fit_on = [&](double a, double b) {
        std::vector<double> x, mag;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double t = std::abs(v[i]);
            if ((v[i] > 0) == (a > 0) && t >= std::abs(a) - 1e-12 && t <= std::abs(b) + 1e-12) {
                x.push_back(t);
                mag.push_back(std::abs(f[i]));
            }
        }
        if (a < 0) {
            std::reverse(x.begin(), x.end());
            std::reverse(mag.begin(), mag.end());
        }
        return decay_order_fit(x, tail_envelope(mag), std::abs(a), std::abs(b));
    };
    const DecayFit positive = fit_on(p.fit.lo, p.fit.hi);

    const double l2 = l2_trapezoid(v, f);
    const double target = plancherel_target(p.window);
    const double plancherel = relative(std::abs(l2 - target), target);
    const double threshold = mode.m * mode.m / (8 * mode.u);

    std::ostringstream body;
    write_transform_csv(body, v, f);
    out.tables.push_back({"transform.csv", body.str()});
    out.assertions.push_back(assert_at_least("fitted decay order of |F(v)| on the positive range", out.anchor,
                                             positive.order, p.min_order));
    out.assertions.push_back(assert_at_most("relative L2 mismatch against the Plancherel value",
                                            "Plancherel identity for the windowed transform", plancherel,
                                            p.plancherel_relative));
    out.report = {{"positive_order", positive.order},
                  {"positive_superpolynomial", positive.superpolynomial},
                  {"l2", l2},
                  {"plancherel_target", target},
                  {"l2_fraction_above_threshold", l2_fraction_above(v, f, threshold)},
                  {"threshold", threshold}};
    if (-p.fit.hi >= p.v_lo) {
        try {
            out.report["negative_order"] = fit_on(-p.fit.lo, -p.fit.hi).order;
        } catch (const DomainError&) {
            out.report["negative_order"] = nullptr;
        }
    }
    return out;
}

}  // namespace

bool ScenarioResult::pass() const {
    return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
}

ScenarioResult execute(const ScenarioConfig& cfg, unsigned workers) {
    ScenarioResult r = std::visit(
        [&](const auto& p) -> ScenarioResult {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, DiracResidualParams>) return dirac_residual_scenario(cfg, p, workers);
            else if constexpr (std::is_same_v<P, NullProductParams>) return null_product_scenario(cfg, p, workers);
            else if constexpr (std::is_same_v<P, MassPairingParams>) return mass_pairing_scenario(cfg, p, workers);
            else if constexpr (std::is_same_v<P, MassOscillationParams>) return mass_oscillation_scenario(cfg, p, workers);
            else if constexpr (std::is_same_v<P, DecayScanParams>) return decay_scan_scenario(cfg, p, workers);
            else if constexpr (std::is_same_v<P, FpKernelParams>) return fp_kernel_scenario(cfg, p, workers);
            else if constexpr (std::is_same_v<P, SidebandsParams>) return sidebands_scenario(cfg, p, workers);
            else return wavefront_scenario(cfg, p, workers);
        },
        cfg.params);
    r.scenario = cfg.scenario;
    return r;
}

}  // namespace volkov::cli
