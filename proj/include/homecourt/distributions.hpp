#pragma once

#include <cmath>
#include <limits>

#include "homecourt/errors.hpp"

namespace homecourt {

namespace detail {

// Continued-fraction core of the regularized incomplete beta (modified Lentz).
inline double beta_cf(double a, double b, double x) {
    constexpr int max_iter = 500;
    constexpr double eps = 1e-16;
    constexpr double fpmin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

} // namespace detail

// Regularized incomplete beta I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_cf(a, b, x) / a;
    return 1.0 - front * detail::beta_cf(b, a, 1.0 - x) / b;
}

// Two-sided tail probability of Student's t with `dof` degrees of freedom:
// P(|T| >= |t|) = I_{dof/(dof+t^2)}(dof/2, 1/2).
inline double student_t_two_sided_p(double t, double dof) {
    if (dof <= 0.0) throw error("student t: dof must be positive");
    if (!std::isfinite(t)) return 0.0;
    const double x = dof / (dof + t * t);
    return incomplete_beta(0.5 * dof, 0.5, x);
}

// Survival function Q(x) = 1 - K(x) of the asymptotic Kolmogorov distribution.
// Two complementary series are used so convergence is fast on both sides.
inline double kolmogorov_q(double x) {
    if (x <= 0.0) return 1.0;
    if (x >= 10.0) return 0.0;
    if (x < 1.0) {
        // K(x) = sqrt(2*pi)/x * sum exp(-(2k-1)^2 pi^2 / (8 x^2))
        const double w = std::sqrt(2.0 * 3.14159265358979323846) / x;
        const double z = 3.14159265358979323846 * 3.14159265358979323846 / (8.0 * x * x);
        double sum = 0.0;
        for (int k = 1; k <= 64; ++k) {
            const double odd = 2.0 * k - 1.0;
            const double term = std::exp(-odd * odd * z);
            sum += term;
            if (term < 1e-18 * (sum + 1e-300)) break;
        }
        const double cdf = w * sum;
        return cdf >= 1.0 ? 0.0 : 1.0 - cdf;
    }
    // Q(x) = 2 * sum (-1)^{k-1} exp(-2 k^2 x^2)
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 256; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-18) break;
    }
    const double q = 2.0 * sum;
    if (q < 0.0) return 0.0;
    if (q > 1.0) return 1.0;
    return q;
}

} // namespace homecourt
