#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace qhe::numeric {

/// Below this argument the band functions switch to their Taylor series.
inline constexpr double series_threshold = 1e-2;

/// 1 - e^(-x) without cancellation for small x.
inline double one_minus_exp_neg(double x) { return -std::expm1(-x); }

/**
 * Mean fractional position inside a flat band for a Boltzmann weight.
 *
 * For a band [a, a + w] populated with weight e^(-beta E), the mean energy is
 * a + w * band_fraction(beta * w). The function falls from 1/2 at x -> 0
 * (uniform occupation) towards 1/x at large x (exponential tail).
 *
 * Small x uses the Bernoulli series 1/2 - x/12 + x^3/720 - x^5/30240 + x^7/1209600,
 * whose truncation error at the threshold is below 1e-21.
 */
inline double band_fraction(double x)
{
    if (x < series_threshold) {
        const double x2 = x * x;
        return 0.5 - x / 12.0 + x * x2 * (1.0 / 720.0 - x2 * (1.0 / 30240.0 - x2 / 1209600.0));
    }
    return 1.0 / x - 1.0 / std::expm1(x);
}

/// g(x) = 1/(e^(-x) - 1) + 1/x, the per-branch factor of the engine function.
/// Strictly decreasing on (0, inf) from -1/2 to -1.
inline double engine_g(double x) { return band_fraction(x) - 1.0; }

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double v)
    {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    [[nodiscard]] double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// |a - b| / max(|a|, |b|, scale); scale guards quantities that are small differences.
inline double relative_error(double a, double b, double scale = 0.0)
{
    const double denom = std::max({std::abs(a), std::abs(b), std::abs(scale)});
    if (denom == 0.0) return 0.0;
    return std::abs(a - b) / denom;
}

} // namespace qhe::numeric
