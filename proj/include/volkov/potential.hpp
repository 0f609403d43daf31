#pragma once

// Plane-wave potential profiles s ↦ (A2(s), A3(s)), s = t + x, in the gauge
// where A0 = A1 = 0, together with the phase integral
//
//     Φ(s_from, s_to) = ∫ [(k2 + A2)² + (k3 + A3)² + m²] ds'
//
// that drives every mode solution.

#include <iosfwd>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace volkov {

struct TransverseField {
    double a2 = 0.0;
    double a3 = 0.0;
};

/// Natural cubic spline through strictly increasing knots. Evaluation
/// outside [front, back] throws DomainError.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> knots, std::vector<double> values);

    double value(double x) const;
    double derivative(double x) const;
    const std::vector<double>& knots() const { return x_; }
    const std::vector<double>& values() const { return y_; }

private:
    std::size_t segment(double x) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;  // second derivatives at the knots
};

class PlaneWavePotential {
public:
    enum class Kind { zero, harmonic, pulse, tabulated };

    struct Zero {};
    /// A2 = λ cos(Ω s), A3 = 0.
    struct Harmonic {
        double amplitude;
        double frequency;
    };
    /// A2 = λ exp(-s²/2σ²) cos(Ω s), A3 = 0.
    struct Pulse {
        double amplitude;
        double frequency;
        double width;
    };
    struct Tabulated {
        CubicSpline a2;
        CubicSpline a3;
        int order = 3;
    };

    static PlaneWavePotential zero();
    static PlaneWavePotential harmonic(double amplitude, double frequency);
    static PlaneWavePotential pulse(double amplitude, double frequency, double width);
    /// Cubic interpolation only (`order` must be 3). `a3` may be empty.
    static PlaneWavePotential tabulated(std::vector<double> s, std::vector<double> a2, std::vector<double> a3 = {},
                                        int order = 3);

    Kind kind() const;
    std::string kind_name() const;

    TransverseField field(double s) const;
    TransverseField field_derivative(double s) const;

    /// Zero and Harmonic phases are evaluated in closed form.
    bool closed_form_phase() const;

    /// Interval on which the profile is defined (the whole line except for
    /// tabulated profiles).
    std::pair<double, double> domain() const;
    void check_domain(double s) const;

    template <class T>
    const T* as() const {
        return std::get_if<T>(&profile_);
    }

private:
    using Profile = std::variant<Zero, Harmonic, Pulse, Tabulated>;
    explicit PlaneWavePotential(Profile p) : profile_(std::move(p)) {}

    Profile profile_;
};

/// Transverse momenta and mass entering the phase integrand.
struct PhaseQuery {
    double k2;
    double k3;
    double m;

    PhaseQuery(double k2_, double k3_, double m_);
};

/// (k2 + A2(s))² + (k3 + A3(s))² + m², always ≥ m².
double phase_integrand(const PlaneWavePotential& pot, const PhaseQuery& q, double s);

/// Φ(s_from, s_to), the integral of phase_integrand. Additive in its
/// endpoints and strictly increasing in s_to.
double phase(const PlaneWavePotential& pot, const PhaseQuery& q, double s_from, double s_to);

/// ζ(s) = Φ(0, s).
double zeta(const PlaneWavePotential& pot, const PhaseQuery& q, double s);

/// Reads a tabulated profile from CSV with a header row and two or three
/// columns (s, a2[, a3]); s must be strictly increasing.
PlaneWavePotential load_tabulated_csv(std::istream& in);
PlaneWavePotential load_tabulated_csv(const std::filesystem::path& path);

}  // namespace volkov
