// Independent reference implementations used only by the tests.  These are
// deliberately written with different algorithms than the library so that a
// shared bug cannot hide: Bessel values come from the integral representation
// evaluated by Simpson's rule, Jn from Miller's downward recurrence, and the
// quadrature checks use composite Simpson.
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// composite Simpson on [a,b] with n (even) intervals
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
    if (n % 2) ++n;
    double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// J0 via (1/pi) * integral_0^pi cos(x sin t) dt, Simpson with many panels
inline double j0(double x, int n = 4000) {
    return simpson([x](double t) { return std::cos(x * std::sin(t)); }, 0.0, kPi, n) / kPi;
}

// Jn for n >= 0 by Miller's downward recurrence, normalized with
// J0 + 2*sum_{k>=1} J2k = 1
inline std::vector<double> jn_table(int n_max, double x) {
    if (x == 0.0) {
        std::vector<double> out(std::size_t(n_max) + 1, 0.0);
        out[0] = 1.0;
        return out;
    }
    int start = n_max + int(std::ceil(10.0 + std::abs(x) + 15.0 * std::cbrt(std::abs(x))));
    std::vector<double> j(std::size_t(start) + 2, 0.0);
    j[std::size_t(start) + 1] = 0.0;
    j[std::size_t(start)] = 1e-30;
    for (int k = start; k >= 1; --k)
        j[std::size_t(k) - 1] = (2.0 * k / x) * j[std::size_t(k)] - j[std::size_t(k) + 1];
    double norm = j[0];
    for (int k = 2; k <= start; k += 2) norm += 2.0 * j[std::size_t(k)];
    std::vector<double> out(std::size_t(n_max) + 1);
    for (int k = 0; k <= n_max; ++k) out[std::size_t(k)] = j[std::size_t(k)] / norm;
    return out;
}

} // namespace oracle
