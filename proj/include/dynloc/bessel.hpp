#pragma once

// Bessel function of the first kind, order zero. Three independent routes:
// power series (small |x|), Hankel asymptotic expansion (large |x|), and an
// integral representation used as a cross-check. No special-function library.

#include <cmath>
#include <stdexcept>

namespace dynloc {

inline constexpr double kPi = 3.14159265358979323846;

// First positive zero of J0, frozen from a bisection of the power series.
inline constexpr double kJ0FirstZero = 2.404825557695773;

namespace detail {

// Minimal double-double helpers (FMA-based). The J0 power series suffers
// catastrophic cancellation for x beyond ~14: terms peak near 1e7 while the
// result is O(1), so plain double summation bottoms out near 1e-9 absolute.
// Carrying a lo word through term recurrence and summation removes that floor.
struct dd {
    double hi, lo;
};

inline dd dd_renorm(double hi, double lo) {
    double s = hi + lo;
    return {s, lo - (s - hi)};
}

inline dd dd_mul(const dd& a, const dd& b) {
    double p = a.hi * b.hi;
    double e = std::fma(a.hi, b.hi, -p) + a.hi * b.lo + a.lo * b.hi;
    return dd_renorm(p, e);
}

// Divide by an exactly representable double (integers here).
inline dd dd_div_exact(const dd& a, double b) {
    double q = a.hi / b;
    double r = std::fma(-q, b, a.hi) + a.lo;
    return dd_renorm(q, r / b);
}

inline dd dd_add(const dd& a, const dd& b) {
    double s = a.hi + b.hi;
    double v = s - a.hi;
    double e = (a.hi - (s - v)) + (b.hi - v);
    return dd_renorm(s, e + a.lo + b.lo);
}

} // namespace detail

// Power series sum_k (-q)^k/(k!)^2, q = x^2/4. Accurate to ~1e-15 absolute
// for |x| <= 25; intended dispatch range is |x| <= 16.
inline double bessel_j0_series(double x) {
    using detail::dd;
    double p = x * x;
    dd q = detail::dd_renorm(p, std::fma(x, x, -p));
    q = detail::dd_div_exact(q, 4.0);
    dd term{1.0, 0.0};
    dd sum{1.0, 0.0};
    for (int k = 1; k < 120; ++k) {
        term = detail::dd_mul(term, q);
        term = detail::dd_div_exact(term, -double(k) * double(k));
        sum = detail::dd_add(sum, term);
        // terms decay monotonically once k > |x|/2
        if (k > 0.5 * std::abs(x) && std::abs(term.hi) < 1e-18) break;
    }
    return sum.hi + sum.lo;
}

// Hankel expansion J0(x) ~ sqrt(2/pi x)[P cos(x - pi/4) - Q sin(x - pi/4)],
// truncated at 14 terms. Error < 2e-13 for x >= 14, < 1e-10 for x >= 12;
// do not use below x ~ 12 (the expansion is divergent).
inline double bessel_j0_asymptotic(double x) {
    double ax = std::abs(x);
    double c = 1.0, P = 1.0, Q = 0.0;
    double sP = -1.0, sQ = -1.0;
    for (int m = 1; m <= 14; ++m) {
        double f = 2.0 * m - 1.0;
        c *= f * f / (8.0 * m * ax);
        if (m & 1) {
            Q += sQ * c;
            sQ = -sQ;
        } else {
            P += sP * c;
            sP = -sP;
        }
    }
    double chi = ax - 0.25 * kPi;
    return std::sqrt(2.0 / (kPi * ax)) * (P * std::cos(chi) - Q * std::sin(chi));
}

// (1/pi) \int_0^pi cos(x sin t) dt by the composite trapezoid rule. The
// integrand is smooth with equal endpoint values, so convergence is spectral;
// 256 panels give ~1e-15 absolute error for |x| <= 50.
inline double bessel_j0_integral(double x, int panels = 256) {
    double s = 0.5 * (1.0 + std::cos(x * std::sin(kPi)));
    for (int k = 1; k < panels; ++k) s += std::cos(x * std::sin(k * kPi / panels));
    return s / panels;
}

// Dispatching evaluation: absolute error <= 1e-10 on |x| <= 50.
inline double bessel_j0(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("bessel_j0: non-finite argument");
    double ax = std::abs(x);
    return ax <= 16.0 ? bessel_j0_series(ax) : bessel_j0_asymptotic(ax);
}

} // namespace dynloc
