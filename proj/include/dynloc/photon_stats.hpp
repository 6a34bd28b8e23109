#pragma once

// Photon-counting statistics: normalized second-order correlation g² from
// count records, its propagated standard deviation, and the Cauchy-Schwarz
// violation statistic with total uncertainty.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>

#include "dynloc/errors.hpp"

namespace dynloc {

struct CountRecord {
    double n_x = 0.0;  // detection events, channel x
    double n_y = 0.0;  // detection events, channel y
    double n_xy = 0.0; // coincidence events
    double T_s = 0.0;  // total acquisition time, s
    double tau_s = 0.0; // coincidence window, s

    void validate() const {
        if (n_x < 0.0 || n_y < 0.0 || n_xy < 0.0)
            throw std::invalid_argument("count record: negative counts");
        if (!(tau_s > 0.0)) throw std::invalid_argument("count record: tau must be > 0");
        if (!(T_s >= tau_s)) throw std::invalid_argument("count record: T must be >= tau");
        if (n_xy > std::min(n_x, n_y))
            throw std::invalid_argument("count record: coincidences exceed singles");
    }
};

struct G2Value {
    double value = 0.0;
    double stddev = std::numeric_limits<double>::quiet_NaN();
    bool stddev_defined = false;
};

// g = N_xy·T / (N_x·N_y·τ); δg = g·sqrt(1/N_x + 1/N_y + 1/N_xy).
inline G2Value g2(const CountRecord& rec) {
    rec.validate();
    if (!(rec.n_x > 0.0) || !(rec.n_y > 0.0))
        throw std::invalid_argument("g2: zero singles channel");
    G2Value out;
    out.value = rec.n_xy * rec.T_s / (rec.n_x * rec.n_y * rec.tau_s);
    if (rec.n_xy > 0.0) {
        out.stddev = out.value * std::sqrt(1.0 / rec.n_x + 1.0 / rec.n_y + 1.0 / rec.n_xy);
        out.stddev_defined = true;
    }
    return out;
}

struct CSViolation {
    double statistic;   // (g_ec)² - g_ee·g_cc; > 0 violates the classical bound
    double delta_total; // sqrt[(2 g_ec δg_ec)² + (g_ee δg_ee)² + (g_cc δg_cc)²]
    double n_sigma;
};

inline CSViolation cauchy_schwarz_violation(const G2Value& g_ec, const G2Value& g_ee,
                                            const G2Value& g_cc) {
    if (!g_ec.stddev_defined || !g_ee.stddev_defined || !g_cc.stddev_defined)
        throw std::invalid_argument("cauchy_schwarz_violation: all stddevs must be defined");
    CSViolation out;
    out.statistic = g_ec.value * g_ec.value - g_ee.value * g_cc.value;
    double t1 = 2.0 * g_ec.value * g_ec.stddev;
    double t2 = g_ee.value * g_ee.stddev;
    double t3 = g_cc.value * g_cc.stddev;
    out.delta_total = std::sqrt(t1 * t1 + t2 * t2 + t3 * t3);
    if (!(out.delta_total > 0.0))
        throw accuracy_error("cauchy_schwarz_violation: degenerate (zero) total uncertainty");
    out.n_sigma = out.statistic / out.delta_total;
    return out;
}

// Synthetic uncorrelated pair of Poisson streams, tallied the way the
// hardware would: T/τ non-overlapping windows; a coincidence is both
// channels registering >= 1 event in the same window; N_x, N_y count events.
inline CountRecord synth_poisson_pair(double rate_x_hz, double rate_y_hz, double T_s,
                                      double tau_s, std::uint64_t seed) {
    if (!(rate_x_hz > 0.0) || !(rate_y_hz > 0.0))
        throw std::invalid_argument("synth_poisson_pair: rates must be > 0");
    if (!(tau_s > 0.0) || !(T_s >= tau_s))
        throw std::invalid_argument("synth_poisson_pair: need T >= tau > 0");
    std::mt19937_64 rng(seed);
    std::poisson_distribution<long> px(rate_x_hz * tau_s);
    std::poisson_distribution<long> py(rate_y_hz * tau_s);
    long windows = std::lround(T_s / tau_s);
    CountRecord rec;
    rec.T_s = double(windows) * tau_s;
    rec.tau_s = tau_s;
    for (long w = 0; w < windows; ++w) {
        long kx = px(rng);
        long ky = py(rng);
        rec.n_x += double(kx);
        rec.n_y += double(ky);
        if (kx > 0 && ky > 0) rec.n_xy += 1.0;
    }
    return rec;
}

} // namespace dynloc
