#pragma once

// Adaptive Gauss-Kronrod (G7, K15) quadrature for the smooth 1D integrands
// used by the coupling and transport code (cosines of bounded phases).

#include <cmath>
#include <utility>

#include "dynloc/errors.hpp"

namespace dynloc {
namespace detail {

// QUADPACK 15-point Kronrod nodes/weights with the embedded 7-point Gauss
// rule on the odd-indexed nodes. Validated by polynomial exactness
// (degree 22 / 13) in the test suite.
inline constexpr double kGK15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kGK15WeightsK[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kGK15WeightsG[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

// Returns the K15 estimate; *err gets |K15 - G7| as a local error proxy.
template <class F>
double gk15(F&& f, double a, double b, double* err) {
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    double fc = f(c);
    double sk = kGK15WeightsK[7] * fc;
    double sg = kGK15WeightsG[3] * fc;
    for (int j = 0; j < 7; ++j) {
        double v = f(c - h * kGK15Nodes[j]) + f(c + h * kGK15Nodes[j]);
        sk += kGK15WeightsK[j] * v;
        if (j & 1) sg += kGK15WeightsG[j / 2] * v;
    }
    if (err) *err = std::abs((sk - sg) * h);
    return sk * h;
}

template <class F>
double adapt(F& f, double a, double b, double tol, int depth) {
    if (depth > 48) throw accuracy_error("quadrature: interval subdivision did not converge");
    double m = 0.5 * (a + b);
    double el = 0.0, er = 0.0;
    double left = gk15(f, a, m, &el);
    double right = gk15(f, m, b, &er);
    if (el + er <= tol) return left + right;
    return adapt(f, a, m, 0.5 * tol, depth + 1) + adapt(f, m, b, 0.5 * tol, depth + 1);
}

} // namespace detail

// Integrate f over [a, b] to the requested relative tolerance. The absolute
// floor avoids endless refinement of integrals that are themselves ~0; it
// scales with interval length so rounding noise in the leaf estimates can
// always meet it (integrands here are O(1)).
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-10, double abs_tol = 0.0) {
    if (a == b) return 0.0;
    double e0 = 0.0;
    double q0 = detail::gk15(f, a, b, &e0);
    double tol = std::max({abs_tol, 1e-14 * std::abs(b - a), rel_tol * std::abs(q0)});
    if (e0 <= tol) return q0;
    return detail::adapt(f, a, b, tol, 0);
}

} // namespace dynloc
