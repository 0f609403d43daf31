#pragma once

#include <cstddef>
#include <vector>

namespace volkov {

/// Power-law fit |value| ~ C |x|^{-N}.
struct DecayFit {
    double order = 0.0;        // N, the negated log-log slope
    double residual = 0.0;     // RMS residual of the log-log fit
    double lower_order = 0.0;  // N fitted on the lower half of the window
    double upper_order = 0.0;  // N fitted on the upper half
    bool superpolynomial = false;
    std::size_t samples = 0;
};

/// Least-squares slope of log|value| against log|x| over samples with
/// x_lo <= |x| <= x_hi. Needs at least eight samples in the window and
/// strictly positive magnitudes there; throws DomainError otherwise.
/// Decay that steepens across the window (upper-half order clearly above
/// the lower-half order) is flagged as superpolynomial.
DecayFit decay_order_fit(const std::vector<double>& x, const std::vector<double>& magnitude, double x_lo, double x_hi);

/// Running supremum from the right: out[i] = max(values[i..]).
std::vector<double> tail_envelope(const std::vector<double>& values);

}  // namespace volkov
