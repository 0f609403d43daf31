#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "volkov/cli.hpp"
#include "volkov/error.hpp"

namespace volkov::cli {

using io::ObjectReader;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(fmt::format("{}: {}", where, what));
}

std::size_t count(ObjectReader& r, const std::string& key, std::size_t fallback, std::size_t min = 1) {
    const std::int64_t v = r.integer_or(key, static_cast<std::int64_t>(fallback));
    if (v < static_cast<std::int64_t>(min)) fail(r.path(key), fmt::format("must be at least {}", min));
    return static_cast<std::size_t>(v);
}

double positive(ObjectReader& r, const std::string& key, double fallback) {
    const double v = r.number_or(key, fallback);
    if (!(v > 0.0)) fail(r.path(key), "must be positive");
    return v;
}

Range range(ObjectReader& r, const std::string& key, Range fallback) {
    if (!r.has(key)) {
        r.optional_child(key);
        return fallback;
    }
    const auto v = r.numbers(key);
    if (v.size() != 2 || !(v[0] <= v[1])) fail(r.path(key), "expected [lo, hi] with lo <= hi");
    return {v[0], v[1]};
}

AxisSpec axis(ObjectReader& r, const std::string& key, AxisSpec fallback) {
    if (!r.has(key)) {
        r.optional_child(key);
        return fallback;
    }
    const auto v = r.numbers(key);
    if (v.size() != 3) fail(r.path(key), "expected [lo, hi, n]");
    if (v[2] < 1 || v[2] != std::floor(v[2])) fail(r.path(key), "n must be a positive integer");
    const auto n = static_cast<std::size_t>(v[2]);
    if (n == 1 ? v[0] != v[1] : !(v[1] > v[0])) fail(r.path(key), "expected lo < hi (or lo = hi with n = 1)");
    return {v[0], v[1], n};
}

void exclude_zero_u(const AxisSpec& a, const std::string& where) {
    for (double u : a.axis().nodes)
        if (u == 0.0) fail(where, "u grid contains u = 0");
}

std::vector<double> finite_list(ObjectReader& r, const std::string& key, std::vector<double> fallback) {
    auto v = r.numbers_or(key, std::move(fallback));
    if (v.empty()) fail(r.path(key), "must not be empty");
    return v;
}

ModeSpec mode_spec(ObjectReader& r, const std::string& key) {
    ModeSpec m;
    const auto child = r.optional_child(key);
    if (!child) return m;
    ObjectReader c(child->get(), r.path(key));
    m.k2 = c.number_or("k2", m.k2);
    m.k3 = c.number_or("k3", m.k3);
    m.u = c.number_or("u", m.u);
    m.m = c.number_or("m", m.m);
    c.finish();
    if (!(m.u < 0.0)) fail(c.path("u"), "kernel modes need u < 0");
    if (!(m.m > 0.0)) fail(c.path("m"), "mass must be positive");
    return m;
}

WindowFunction window_spec(const json& j, const std::string& where) {
    ObjectReader r(j, where);
    const std::string kind = r.string("kind");
    auto build = [&]() -> WindowFunction {
        if (kind == "bump") return WindowFunction::bump(r.number("center"), r.number("half_width"));
        if (kind == "gaussian") return WindowFunction::gaussian(r.number("center"), r.number("width"));
        if (kind == "hann") return WindowFunction::hann(r.number("lo"), r.number("hi"));
        fail(r.path("kind"), fmt::format("unknown window kind '{}'", kind));
    };
    try {
        WindowFunction w = build();
        r.finish();
        return w;
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        fail(where, e.what());
    }
}

// Each parser reads "parameters" and "tolerances" of its scenario.

DiracResidualParams parse_dirac(ObjectReader& p, ObjectReader& t, const PlaneWavePotential& pot) {
    DiracResidualParams d;
    d.modes = count(p, "modes", d.modes);
    d.k = range(p, "k_range", d.k);
    d.u_magnitude = range(p, "u_magnitude_range", d.u_magnitude);
    d.mass = range(p, "mass_range", d.mass);
    d.point = range(p, "point_range", d.point);
    if (!(d.u_magnitude.lo > 0.0)) fail(p.path("u_magnitude_range"), "must exclude u = 0");
    if (!(d.mass.lo > 0.0)) fail(p.path("mass_range"), "masses must be positive");
    d.relative_residual = positive(t, "relative_residual", pot.closed_form_phase() ? 1e-10 : 1e-8);
    return d;
}

NullProductParams parse_null(ObjectReader& p, ObjectReader& t) {
    NullProductParams d;
    d.packets = count(p, "packets", d.packets);
    d.mass = positive(p, "mass", d.mass);
    d.u = axis(p, "u", d.u);
    d.k2 = axis(p, "k2", d.k2);
    d.k3 = axis(p, "k3", d.k3);
    exclude_zero_u(d.u, p.path("u"));
    std::vector<double> s;
    for (int i = -10; i <= 10; ++i) s.push_back(i);
    d.s_values = finite_list(p, "s_values", s);
    d.relative_deviation = positive(t, "relative_deviation", d.relative_deviation);
    return d;
}

MassPairingParams parse_pairing(ObjectReader& p, ObjectReader& t, const PlaneWavePotential& pot) {
    MassPairingParams d;
    d.draws = count(p, "draws", d.draws);
    if (p.has("amplitude_range")) {
        if (!pot.as<PlaneWavePotential::Harmonic>()) fail(p.path("amplitude_range"), "requires a harmonic potential");
        d.amplitude = range(p, "amplitude_range", {});
    } else {
        p.optional_child("amplitude_range");
    }
    d.mass = range(p, "mass_range", d.mass);
    d.k = range(p, "k_range", d.k);
    d.u_magnitude = range(p, "u_magnitude_range", d.u_magnitude);
    d.s = range(p, "s_range", d.s);
    if (!(d.u_magnitude.lo > 0.0)) fail(p.path("u_magnitude_range"), "must exclude u = 0");
    if (!(d.mass.lo > 0.0)) fail(p.path("mass_range"), "masses must be positive");
    d.relative_gap = positive(t, "relative_gap", d.relative_gap);
    return d;
}

MassOscillationParams parse_oscillation(ObjectReader& p, ObjectReader& t) {
    MassOscillationParams d;
    d.interval = range(p, "mass_interval", d.interval);
    if (!(d.interval.lo > 0.0) || !(d.interval.hi > d.interval.lo))
        fail(p.path("mass_interval"), "expected 0 < lo < hi");
    d.masses = count(p, "masses", d.masses, 3);
    if (const auto w = p.optional_child("mass_weight")) {
        d.weight = io::mass_weight_from_json(w->get());
        if (d.weight->lo() < d.interval.lo || d.weight->hi() > d.interval.hi)
            fail(p.path("mass_weight"), "support must lie inside the mass interval");
    }
    d.disjoint_check = p.boolean_or("disjoint_check", d.disjoint_check);
    d.u = axis(p, "u", d.u);
    d.k2 = axis(p, "k2", d.k2);
    d.k3 = axis(p, "k3", d.k3);
    exclude_zero_u(d.u, p.path("u"));
    d.epsilons = finite_list(p, "epsilons", d.epsilons);
    for (double e : d.epsilons)
        if (!(e > 0.0)) fail(p.path("epsilons"), "regulators must be positive");
    if (const auto g = p.optional_child("s_grid")) {
        ObjectReader r(g->get(), p.path("s_grid"));
        d.s_grid.lo = r.number_or("lo", d.s_grid.lo);
        d.s_grid.hi = r.number_or("hi", d.s_grid.hi);
        d.s_grid.step = positive(r, "step", d.s_grid.step);
        r.finish();
        if (!(d.s_grid.hi > d.s_grid.lo)) fail(p.path("s_grid"), "expected lo < hi");
    }
    d.relative_gap = positive(t, "relative_gap", d.relative_gap);
    d.disjoint_ratio = positive(t, "disjoint_ratio", d.disjoint_ratio);
    return d;
}

DecayScanParams parse_decay(ObjectReader& p, ObjectReader& t) {
    DecayScanParams d;
    d.mass = positive(p, "mass", d.mass);
    d.u = axis(p, "u", d.u);
    d.k2 = axis(p, "k2", d.k2);
    d.k3 = axis(p, "k3", d.k3);
    exclude_zero_u(d.u, p.path("u"));
    d.weight_center = p.number_or("weight_center", d.weight_center);
    d.weight_width = positive(p, "weight_width", d.weight_width);
    d.s_values = finite_list(p, "s_values", d.s_values);
    d.l = axis(p, "l", d.l);
    if (!(d.l.lo > 0.0)) fail(p.path("l"), "l values must be positive (both signs are scanned)");
    if (d.l.n < 8) fail(p.path("l"), "need at least 8 l values");
    if (p.has("single_mode_u") && p.child("single_mode_u").is_null()) {
        d.single_mode_u.reset();
    } else {
        d.single_mode_u = p.number_or("single_mode_u", *d.single_mode_u);
        if (*d.single_mode_u == 0.0) fail(p.path("single_mode_u"), "must be nonzero");
    }
    d.min_order = positive(t, "min_order", d.min_order);
    return d;
}

FpKernelParams parse_kernel(ObjectReader& p, ObjectReader& t) {
    FpKernelParams d;
    d.mass = positive(p, "mass", d.mass);
    d.u = axis(p, "u", d.u);
    d.k2 = axis(p, "k2", d.k2);
    d.k3 = axis(p, "k3", d.k3);
    for (double u : d.u.axis().nodes)
        if (!(u < 0.0)) fail(p.path("u"), "the projector kernel needs u < 0");
    d.s_values = finite_list(p, "s_values", d.s_values);
    d.s_tilde_values = finite_list(p, "s_tilde_values", d.s_tilde_values);
    d.relative_deviation = positive(t, "relative_deviation", d.relative_deviation);
    return d;
}

SidebandsParams parse_sidebands(ObjectReader& p, ObjectReader& t, const PlaneWavePotential& pot) {
    if (!pot.as<PlaneWavePotential::Harmonic>()) fail("potential", "sidebands need a harmonic potential");
    SidebandsParams d;
    d.mode = mode_spec(p, "mode");
    d.n_max = static_cast<int>(count(p, "n_max", static_cast<std::size_t>(d.n_max), 0));
    d.periods = positive(p, "periods", d.periods);
    d.step = positive(p, "step", d.step);
    d.s_tilde = p.number_or("s_tilde", d.s_tilde);
    d.pad = static_cast<int>(count(p, "pad", static_cast<std::size_t>(d.pad)));
    d.window_fraction = positive(p, "window_fraction", d.window_fraction);
    d.amplitude_relative = positive(t, "amplitude_relative", d.amplitude_relative);
    d.parseval = positive(t, "parseval", d.parseval);
    d.frequency_bins = positive(t, "frequency_bins", d.frequency_bins);
    return d;
}

WavefrontParams parse_wavefront(ObjectReader& p, ObjectReader& t) {
    WavefrontParams d;
    d.mode = mode_spec(p, "mode");
    if (const auto w = p.optional_child("window")) d.window = window_spec(w->get(), p.path("window"));
    if (const auto g = p.optional_child("v_grid")) {
        ObjectReader r(g->get(), p.path("v_grid"));
        d.v_lo = r.number_or("lo", d.v_lo);
        d.v_hi = r.number_or("hi", d.v_hi);
        d.v_step = positive(r, "step", d.v_step);
        r.finish();
        if (!(d.v_hi > d.v_lo)) fail(p.path("v_grid"), "expected lo < hi");
    }
    d.fit = range(p, "fit_range", d.fit);
    if (!(d.fit.lo > 0.0) || d.fit.lo < d.v_lo || d.fit.hi > d.v_hi || !(d.fit.hi > d.fit.lo))
        fail(p.path("fit_range"), "must be a positive interval inside the v grid");
    d.min_order = positive(t, "min_order", d.min_order);
    d.plancherel_relative = positive(t, "plancherel_relative", d.plancherel_relative);
    return d;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {
        "dirac-residual", "null-product-invariance", "mass-pairing", "mass-oscillation",
        "decay-scan",     "fp-kernel-export",        "sidebands",    "wavefront-probe"};
    return names;
}

Axis AxisSpec::axis() const { return n == 1 ? Axis::point(lo) : Axis::trapezoid(lo, hi, n); }

std::string config_hash(const json& doc) {
    json canonical = doc;
    if (canonical.is_object()) {
        canonical.erase("workers");
        canonical.erase("output_dir");
    }
    const std::string text = canonical.dump();
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 digest failed");
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

ScenarioConfig parse_config(const std::string& scenario, const json& doc, const std::filesystem::path& base_dir) {
    const auto& names = scenario_names();
    if (std::find(names.begin(), names.end(), scenario) == names.end())
        fail("scenario", fmt::format("unknown scenario '{}'", scenario));

    ObjectReader r(doc, "config");
    const std::int64_t version = r.integer("schema_version");
    if (version != schema_version)
        fail(r.path("schema_version"), fmt::format("unsupported version {} (expected {})", version, schema_version));
    const std::string named = r.string_or("scenario", scenario);
    if (named != scenario)
        fail(r.path("scenario"), fmt::format("config is for '{}' but '{}' was requested", named, scenario));

    ScenarioConfig cfg;
    cfg.scenario = scenario;
    const std::int64_t seed = r.integer_or("seed", 1);
    if (seed < 0) fail(r.path("seed"), "must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(seed);
    if (r.has("workers")) {
        const std::int64_t w = r.integer("workers");
        if (w < 1 || w > 1024) fail(r.path("workers"), "must be between 1 and 1024");
        cfg.workers = static_cast<unsigned>(w);
    } else {
        r.optional_child("workers");
    }
    if (r.has("output_dir")) {
        cfg.output_dir = r.string("output_dir");
    } else {
        r.optional_child("output_dir");
    }
    cfg.potential = io::potential_from_json(r.child("potential"), base_dir);

    static const json empty = json::object();
    const auto params = r.optional_child("parameters");
    const auto tols = r.optional_child("tolerances");
    ObjectReader p(params ? params->get() : empty, "config.parameters");
    ObjectReader t(tols ? tols->get() : empty, "config.tolerances");

    if (scenario == "dirac-residual") cfg.params = parse_dirac(p, t, cfg.potential);
    else if (scenario == "null-product-invariance") cfg.params = parse_null(p, t);
    else if (scenario == "mass-pairing") cfg.params = parse_pairing(p, t, cfg.potential);
    else if (scenario == "mass-oscillation") cfg.params = parse_oscillation(p, t);
    else if (scenario == "decay-scan") cfg.params = parse_decay(p, t);
    else if (scenario == "fp-kernel-export") cfg.params = parse_kernel(p, t);
    else if (scenario == "sidebands") cfg.params = parse_sidebands(p, t, cfg.potential);
    else cfg.params = parse_wavefront(p, t);

    p.finish();
    t.finish();
    r.finish();
    cfg.hash = config_hash(doc);
    return cfg;
}

}  // namespace volkov::cli
