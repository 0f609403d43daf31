#include "volkov/potential.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "volkov/error.hpp"
#include "volkov/quadrature.hpp"

namespace volkov {

// ---------------------------------------------------------------------------
// CubicSpline

CubicSpline::CubicSpline(std::vector<double> knots, std::vector<double> values)
    : x_(std::move(knots)), y_(std::move(values)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw DomainError("CubicSpline: need at least two knots with matching values");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) throw DomainError("CubicSpline: non-finite sample");
        if (i > 0 && !(x_[i] > x_[i - 1])) throw DomainError("CubicSpline: knots must be strictly increasing");
    }
    // Natural end conditions; tridiagonal solve (Thomas algorithm).
    m_.assign(n, 0.0);
    if (n == 2) return;
    std::vector<double> diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        diag[i] = 2.0 * (h0 + h1);
        upper[i] = h1;
        rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    }
    for (std::size_t i = 2; i + 1 < n; ++i) {
        const double lower = x_[i] - x_[i - 1];
        const double w = lower / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
        if (i == 1) break;
    }
}

std::size_t CubicSpline::segment(double x) const {
    if (x_.empty() || !(x >= x_.front() && x <= x_.back()))
        throw DomainError(fmt::format("tabulated potential queried at s = {} outside [{}, {}]", x,
                                      x_.empty() ? 0.0 : x_.front(), x_.empty() ? 0.0 : x_.back()));
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(std::distance(x_.begin(), it));
    return std::clamp<std::size_t>(i, 1, x_.size() - 1) - 1;
}

double CubicSpline::value(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h + ((1.0 - 3.0 * a * a) * m_[i] + (3.0 * b * b - 1.0) * m_[i + 1]) * h / 6.0;
}

// ---------------------------------------------------------------------------
// PlaneWavePotential

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(fmt::format("potential parameter {} must be finite", what));
}

}  // namespace

PlaneWavePotential PlaneWavePotential::zero() { return PlaneWavePotential(Zero{}); }

PlaneWavePotential PlaneWavePotential::harmonic(double amplitude, double frequency) {
    require_finite(amplitude, "amplitude");
    require_finite(frequency, "frequency");
    if (frequency == 0.0) throw DomainError("harmonic potential needs a nonzero frequency");
    return PlaneWavePotential(Harmonic{amplitude, frequency});
}

PlaneWavePotential PlaneWavePotential::pulse(double amplitude, double frequency, double width) {
    require_finite(amplitude, "amplitude");
    require_finite(frequency, "frequency");
    require_finite(width, "width");
    if (!(width > 0.0)) throw DomainError("pulse envelope width must be positive");
    return PlaneWavePotential(Pulse{amplitude, frequency, width});
}

PlaneWavePotential PlaneWavePotential::tabulated(std::vector<double> s, std::vector<double> a2, std::vector<double> a3,
                                                 int order) {
    if (order != 3) throw DomainError(fmt::format("tabulated potential: interpolation order {} unsupported (cubic only)", order));
    if (a3.empty()) a3.assign(s.size(), 0.0);
    if (a2.size() != s.size() || a3.size() != s.size())
        throw DomainError("tabulated potential: column lengths differ");
    Tabulated t{CubicSpline(s, std::move(a2)), CubicSpline(std::move(s), std::move(a3)), order};
    return PlaneWavePotential(std::move(t));
}

PlaneWavePotential::Kind PlaneWavePotential::kind() const { return static_cast<Kind>(profile_.index()); }

std::string PlaneWavePotential::kind_name() const {
    switch (kind()) {
        case Kind::zero: return "zero";
        case Kind::harmonic: return "harmonic";
        case Kind::pulse: return "pulse";
        case Kind::tabulated: return "tabulated";
    }
    return "unknown";
}

TransverseField PlaneWavePotential::field(double s) const {
    switch (kind()) {
        case Kind::zero: return {};
        case Kind::harmonic: {
            const auto& h = std::get<Harmonic>(profile_);
            return {h.amplitude * std::cos(h.frequency * s), 0.0};
        }
        case Kind::pulse: {
            const auto& p = std::get<Pulse>(profile_);
            const double env = std::exp(-s * s / (2.0 * p.width * p.width));
            return {p.amplitude * env * std::cos(p.frequency * s), 0.0};
        }
        case Kind::tabulated: {
            const auto& t = std::get<Tabulated>(profile_);
            return {t.a2.value(s), t.a3.value(s)};
        }
    }
    return {};
}

TransverseField PlaneWavePotential::field_derivative(double s) const {
    switch (kind()) {
        case Kind::zero: return {};
        case Kind::harmonic: {
            const auto& h = std::get<Harmonic>(profile_);
            return {-h.amplitude * h.frequency * std::sin(h.frequency * s), 0.0};
        }
        case Kind::pulse: {
            const auto& p = std::get<Pulse>(profile_);
            const double w2 = p.width * p.width;
            const double env = std::exp(-s * s / (2.0 * w2));
            const double c = std::cos(p.frequency * s);
            const double sn = std::sin(p.frequency * s);
            return {p.amplitude * env * (-(s / w2) * c - p.frequency * sn), 0.0};
        }
        case Kind::tabulated: {
            const auto& t = std::get<Tabulated>(profile_);
            return {t.a2.derivative(s), t.a3.derivative(s)};
        }
    }
    return {};
}

bool PlaneWavePotential::closed_form_phase() const { return kind() == Kind::zero || kind() == Kind::harmonic; }

std::pair<double, double> PlaneWavePotential::domain() const {
    if (const auto* t = as<Tabulated>()) return {t->a2.knots().front(), t->a2.knots().back()};
    const double inf = std::numeric_limits<double>::infinity();
    return {-inf, inf};
}

void PlaneWavePotential::check_domain(double s) const {
    const auto [lo, hi] = domain();
    if (!(s >= lo && s <= hi)) throw DomainError(fmt::format("s = {} outside the potential's domain [{}, {}]", s, lo, hi));
}

// ---------------------------------------------------------------------------
// Phase

PhaseQuery::PhaseQuery(double k2_, double k3_, double m_) : k2(k2_), k3(k3_), m(m_) {
    if (!std::isfinite(k2) || !std::isfinite(k3)) throw DomainError("phase query: transverse momenta must be finite");
    if (!(m > 0.0) || !std::isfinite(m)) throw DomainError(fmt::format("phase query: mass must be positive, got {}", m));
}

double phase_integrand(const PlaneWavePotential& pot, const PhaseQuery& q, double s) {
    pot.check_domain(s);
    const TransverseField a = pot.field(s);
    const double p2 = q.k2 + a.a2;
    const double p3 = q.k3 + a.a3;
    return p2 * p2 + p3 * p3 + q.m * q.m;
}

namespace {

// sin(w b) - sin(w a) without cancellation for nearby endpoints.
double sine_difference(double w, double a, double b) {
    return 2.0 * std::cos(0.5 * w * (a + b)) * std::sin(0.5 * w * (b - a));
}

}  // namespace

double phase(const PlaneWavePotential& pot, const PhaseQuery& q, double s_from, double s_to) {
    pot.check_domain(s_from);
    pot.check_domain(s_to);
    if (s_from == s_to) return 0.0;
    const double free = q.k2 * q.k2 + q.k3 * q.k3 + q.m * q.m;
    if (pot.kind() == PlaneWavePotential::Kind::zero) return free * (s_to - s_from);
    if (const auto* h = pot.as<PlaneWavePotential::Harmonic>()) {
        const double lam = h->amplitude;
        const double w = h->frequency;
        return (free + 0.5 * lam * lam) * (s_to - s_from) + (2.0 * q.k2 * lam / w) * sine_difference(w, s_from, s_to) +
               (lam * lam / (4.0 * w)) * sine_difference(2.0 * w, s_from, s_to);
    }

    auto integrand = [&](double s) { return phase_integrand(pot, q, s); };
    const double sign = s_to > s_from ? 1.0 : -1.0;
    const double lo = std::min(s_from, s_to);
    const double hi = std::max(s_from, s_to);

    if (const auto* t = pot.as<PlaneWavePotential::Tabulated>()) {
        // Integrate knot interval by knot interval so every piece is smooth.
        const auto& knots = t->a2.knots();
        std::vector<double> pieces;
        double left = lo;
        auto it = std::upper_bound(knots.begin(), knots.end(), lo);
        for (; it != knots.end() && *it < hi; ++it) {
            pieces.push_back(quadrature::integrate_adaptive(integrand, left, *it));
            left = *it;
        }
        pieces.push_back(quadrature::integrate_adaptive(integrand, left, hi));
        return sign * compensated_sum(pieces);
    }

    // Pulse: split into unit-length pieces so the oscillation is resolved
    // locally and the relative tolerance stays meaningful.
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(hi - lo)));
    const double step = (hi - lo) / static_cast<double>(n);
    std::vector<double> pieces(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = lo + step * static_cast<double>(i);
        const double b = (i + 1 == n) ? hi : a + step;
        pieces[i] = quadrature::integrate_adaptive(integrand, a, b);
    }
    return sign * compensated_sum(pieces);
}

double zeta(const PlaneWavePotential& pot, const PhaseQuery& q, double s) { return phase(pot, q, 0.0, s); }

// ---------------------------------------------------------------------------
// CSV loading

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

double parse_number(std::string cell, std::size_t line_no) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    cell.erase(cell.begin(), std::find_if(cell.begin(), cell.end(), not_space));
    cell.erase(std::find_if(cell.rbegin(), cell.rend(), not_space).base(), cell.end());
    double v = 0.0;
    const auto* first = cell.data();
    const auto* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || cell.empty())
        throw ConfigError(fmt::format("potential CSV line {}: '{}' is not a number", line_no, cell));
    return v;
}

}  // namespace

PlaneWavePotential load_tabulated_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t columns = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        columns = split_csv_line(line).size();
        break;
    }
    if (columns == 0) throw ConfigError("potential CSV: missing header row");
    if (columns != 2 && columns != 3) throw ConfigError("potential CSV: expected 2 or 3 columns (s, a2[, a3])");

    std::vector<double> s, a2, a3;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != columns)
            throw ConfigError(fmt::format("potential CSV line {}: expected {} columns", line_no, columns));
        s.push_back(parse_number(cells[0], line_no));
        a2.push_back(parse_number(cells[1], line_no));
        if (columns == 3) a3.push_back(parse_number(cells[2], line_no));
        if (s.size() > 1 && !(s.back() > s[s.size() - 2]))
            throw ConfigError(fmt::format("potential CSV line {}: s must be strictly increasing", line_no));
    }
    if (s.size() < 4) throw ConfigError("potential CSV: need at least four samples for cubic interpolation");
    return PlaneWavePotential::tabulated(std::move(s), std::move(a2), std::move(a3));
}

PlaneWavePotential load_tabulated_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open potential CSV '{}'", path.string()));
    return load_tabulated_csv(in);
}

}  // namespace volkov
