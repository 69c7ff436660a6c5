#include "screenopt/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace screenopt {

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double eps = std::numeric_limits<double>::epsilon();
    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 10.0 * eps) break;
    }
    return h;
}

}  // namespace

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double ibeta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::domain_error("ibeta: parameters must be positive");
    }
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;

    double log_bt = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
    // Use the side of the symmetry relation on which the continued
    // fraction converges rapidly.
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::exp(log_bt) * betacf(a, b, x) / a;
    }
    return 1.0 - std::exp(log_bt) * betacf(b, a, 1.0 - x) / b;
}

double binomial_upper_tail(std::int64_t n, std::int64_t k, double p) {
    if (n < 0) throw std::domain_error("binomial_upper_tail: n < 0");
    if (k <= 0) return 1.0;
    if (k > n) return 0.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    return ibeta(static_cast<double>(k), static_cast<double>(n - k + 1), p);
}

}  // namespace screenopt
