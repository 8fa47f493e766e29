#include "heckit/normal.hpp"

#include <cmath>
#include <limits>

namespace heckit {
namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kTail = 6.0;

// x + m/(x + (m+1)/(x + (m+2)/(x + ...))) by the modified Lentz method, x >= kTail.
double mills_fraction(double x, double m) {
    constexpr double tiny = 1e-300;
    double f = x;
    double c = f;
    double d = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const double a = m + k;
        d = x + a * d;
        if (d == 0.0) d = tiny;
        d = 1.0 / d;
        c = x + a / c;
        if (c == 0.0) c = tiny;
        const double step = c * d;
        f *= step;
        if (std::abs(step - 1.0) < 1e-16) break;
    }
    return f;
}

// Reciprocal of the Mills ratio, (1 - Phi(x)) / phi(x), for x >= kTail.
double reciprocal_mills(double x) { return x + 1.0 / mills_fraction(x, 2.0); }

}  // namespace

double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double log_normal_pdf(double z) { return -kLogSqrt2Pi - 0.5 * z * z; }

double normal_cdf(double z) {
    if (std::isnan(z)) return z;
    if (z < -kTail) return normal_pdf(z) / reciprocal_mills(-z);
    if (z > kTail) return 1.0 - normal_pdf(z) / reciprocal_mills(z);
    return 0.5 * std::erfc(-z * kInvSqrt2);
}

double log_normal_cdf(double z) {
    if (std::isnan(z)) return z;
    if (z < -kTail) return log_normal_pdf(z) - std::log(reciprocal_mills(-z));
    if (z <= 0.0) return std::log(0.5 * std::erfc(-z * kInvSqrt2));
    if (z <= kTail) return std::log1p(-0.5 * std::erfc(z * kInvSqrt2));
    return std::log1p(-normal_pdf(z) / reciprocal_mills(z));
}

double inverse_mills(double z) {
    if (std::isnan(z)) return z;
    if (z < -kTail) return reciprocal_mills(-z);
    return std::exp(log_normal_pdf(z) - log_normal_cdf(z));
}

double inverse_mills_delta(double z) {
    if (std::isnan(z)) return z;
    double delta;
    if (z < -kTail) {
        // t is lambda + z.
        const double x = -z;
        const double t = 1.0 / mills_fraction(x, 2.0);
        delta = (x + t) * t;
    } else {
        const double lambda = inverse_mills(z);
        delta = lambda * (lambda + z);
    }
    constexpr double lo = std::numeric_limits<double>::denorm_min();
    const double hi = std::nextafter(1.0, 0.0);
    if (!(delta > lo)) return lo;
    if (delta > hi) return hi;
    return delta;
}

}  // namespace heckit
