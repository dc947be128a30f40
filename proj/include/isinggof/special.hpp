#pragma once

#include <cmath>
#include <stdexcept>

namespace isinggof {

/// Regularized upper incomplete gamma Q(s, x) = Gamma(s, x) / Gamma(s),
/// series / continued-fraction split as in the classic treatment.
inline double gamma_q(double s, double x) {
    if (s <= 0.0 || x < 0.0) throw std::domain_error("gamma_q needs s > 0, x >= 0");
    if (x == 0.0) return 1.0;

    const double lg = std::lgamma(s);
    if (x < s + 1.0) {
        // P(s,x) by series, Q = 1 - P.
        double term = 1.0 / s;
        double sum = term;
        double ap = s;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * 1e-15) break;
        }
        const double p = sum * std::exp(-x + s * std::log(x) - lg);
        return 1.0 - p;
    }
    // Q(s,x) by Lentz continued fraction.
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-15) break;
    }
    return std::exp(-x + s * std::log(x) - lg) * h;
}

/// Survival function of the chi-squared distribution with `dof` degrees of
/// freedom: P(X >= stat).
inline double chi_square_sf(double stat, double dof) {
    if (stat <= 0.0) return 1.0;
    return gamma_q(dof / 2.0, stat / 2.0);
}

} // namespace isinggof
