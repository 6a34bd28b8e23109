#pragma once

// Transport observables: variance of a probability field along an axis,
// the analytic 1D dynamic-localization variance, the u/v phase integrals,
// the Appendix-style path factors on the triangular lattice, and a ballistic
// (σ ∝ z) fit.

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "dynloc/bessel.hpp"
#include "dynloc/coupling.hpp"
#include "dynloc/errors.hpp"
#include "dynloc/evolution.hpp"
#include "dynloc/lattice.hpp"
#include "dynloc/quadrature.hpp"

namespace dynloc {

enum class Axis { chain, horizontal, vertical };

inline const char* to_string(Axis a) {
    switch (a) {
    case Axis::chain: return "chain";
    case Axis::horizontal: return "horizontal";
    case Axis::vertical: return "vertical";
    }
    return "?";
}

inline Axis axis_from_string(const std::string& s) {
    if (s == "chain") return Axis::chain;
    if (s == "horizontal") return Axis::horizontal;
    if (s == "vertical") return Axis::vertical;
    throw config_error("axis: expected chain|horizontal|vertical, got '" + s + "'");
}

// σ² = Σ (Δl_i)² p_i / Σ p_i with Δl the coordinate offset from the injection
// site along the axis, in units of the nearest spacing d.
inline double variance(const ProbabilityField& field, const Lattice& lat, Axis axis,
                       int injection_site) {
    if (field.p.size() != lat.sites.size())
        throw std::invalid_argument("variance: field/lattice size mismatch");
    if (axis == Axis::chain && lat.dimension != LatticeDim::one_d)
        throw std::invalid_argument("variance: chain axis needs a 1D lattice");
    if (axis != Axis::chain && lat.dimension != LatticeDim::two_d)
        throw std::invalid_argument("variance: horizontal/vertical axes need a 2D lattice");
    double total = 0.0;
    for (double v : field.p) {
        if (v < -1e-12) throw std::invalid_argument("variance: negative probability");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-6)
        throw std::invalid_argument("variance: field is not normalized");

    const Site& inj = lat.site(injection_site);
    double acc = 0.0;
    for (std::size_t i = 0; i < field.p.size(); ++i) {
        const Site& s = lat.sites[i];
        double dl = (axis == Axis::vertical ? s.y - inj.y : s.x - inj.x) / lat.d_um;
        acc += dl * dl * field.p[i];
    }
    return acc / total;
}

// σ² = 2C²z² J0²(2πωA/L); the A = 0 straight baseline is 2C²z².
inline double variance_analytic_1d(double C, double z_cm, double omega, double A_um,
                                   double L_cm) {
    if (!(C > 0.0)) throw std::invalid_argument("variance_analytic_1d: C must be > 0");
    if (!(L_cm > 0.0)) throw std::invalid_argument("variance_analytic_1d: L must be > 0");
    if (z_cm < 0.0) throw std::invalid_argument("variance_analytic_1d: negative z");
    double j = bessel_j0(bessel_argument(omega, A_um, L_cm));
    return 2.0 * C * C * z_cm * z_cm * j * j;
}

struct UVResult {
    double u, v;   // cm
    double sigma2; // 2C²(u² + v²)
};

// u(z) = ∫₀ᶻ cos[(2πωA/L)η] dz', v(z) = ∫₀ᶻ sin[(2πωA/L)η] dz' with
// η(z) = 1 - cos(2πz/L) for the sinusoidal profile. Straight degenerates to
// (z, 0). Sampled profiles have no closed η and are rejected.
inline UVResult uv_integrals(ProfileKind kind, double omega, double A_um, double L_cm,
                             double z_cm, double C) {
    if (!(L_cm > 0.0)) throw std::invalid_argument("uv_integrals: L must be > 0");
    if (z_cm < 0.0) throw std::invalid_argument("uv_integrals: negative z");
    if (kind == ProfileKind::sampled)
        throw std::invalid_argument("uv_integrals: eta(z) unavailable for sampled profiles");
    double u, v;
    if (kind == ProfileKind::straight || A_um == 0.0) {
        u = z_cm;
        v = 0.0;
    } else {
        double a = bessel_argument(omega, A_um, L_cm);
        auto phase = [&](double t) { return a * (1.0 - std::cos(2.0 * kPi * t / L_cm)); };
        u = integrate([&](double t) { return std::cos(phase(t)); }, 0.0, z_cm, 1e-9);
        v = integrate([&](double t) { return std::sin(phase(t)); }, 0.0, z_cm, 1e-9);
    }
    return {u, v, 2.0 * C * C * (u * u + v * v)};
}

enum class Path { I, II, III };

// Inputs for the horizontal-transport path factors on the triangular lattice.
// omega_d is the normalized frequency of the nearest spacing d; the √3d
// spacing scales it by √3 inside Path I's phase.
struct PathParams {
    double C_sqrt3d_h; // cm⁻¹, (√3d, h) bonds
    double C_d_h30;    // cm⁻¹, (d, h30) bonds
    double C_d_v;      // cm⁻¹, (d, v) bonds
    double omega_d;
    double A_um;
    double L_cm;
};

// Cu(z) per path. Path I: C_{√3d-h} ∫ cos[(2√3πωA/L)η]. Path II:
// C_{d-h30} ∫ cos[(2πωA cos30°/L)η]. Path III: the product approximation
// over four segments, with the A·cos90° integrand equal to 1 exactly, i.e.
// ((C_{d-v}+C_{d-h30})/2)(Δz₁+Δz₄) ∫₀^{Δz₂+Δz₃} cos[(2πωA cos30°/L)η].
inline double path_coupling_factor(Path path, const PathParams& pp, double z_cm,
                                   const std::array<double, 4>* segment_lengths = nullptr) {
    if (!(pp.L_cm > 0.0)) throw std::invalid_argument("path_coupling_factor: L must be > 0");
    double a = bessel_argument(pp.omega_d, pp.A_um, pp.L_cm);
    auto eta = [&](double t) { return 1.0 - std::cos(2.0 * kPi * t / pp.L_cm); };
    auto cos_int = [&](double scale, double upto) {
        return integrate([&](double t) { return std::cos(scale * a * eta(t)); }, 0.0, upto,
                         1e-9);
    };
    switch (path) {
    case Path::I:
        if (z_cm < 0.0) throw std::invalid_argument("path_coupling_factor: negative z");
        return pp.C_sqrt3d_h * cos_int(std::sqrt(3.0), z_cm);
    case Path::II:
        if (z_cm < 0.0) throw std::invalid_argument("path_coupling_factor: negative z");
        return pp.C_d_h30 * cos_int(std::sqrt(3.0) * 0.5, z_cm);
    case Path::III: {
        if (!segment_lengths)
            throw std::invalid_argument("path_coupling_factor: Path III needs segment lengths");
        for (double s : *segment_lengths)
            if (!(s >= 0.0)) throw std::invalid_argument("path_coupling_factor: negative segment");
        double straight_part = (*segment_lengths)[0] + (*segment_lengths)[3];
        double modulated_part = (*segment_lengths)[1] + (*segment_lengths)[2];
        return 0.5 * (pp.C_d_v + pp.C_d_h30) * straight_part *
               cos_int(std::sqrt(3.0) * 0.5, modulated_part);
    }
    }
    throw std::invalid_argument("path_coupling_factor: unknown path");
}

struct VariancePoint {
    double z_cm;
    double sigma2;
    double error = std::numeric_limits<double>::quiet_NaN(); // optional
};

struct VarianceCurve {
    std::vector<VariancePoint> points;
    Axis axis = Axis::chain;
};

struct BallisticFit {
    double slope;     // of σ against z, through the origin
    double r_squared; // clamped to [0, 1]
};

inline BallisticFit ballistic_fit(const VarianceCurve& curve) {
    if (curve.points.size() < 3)
        throw std::invalid_argument("ballistic_fit: need at least 3 points");
    double szz = 0.0, szs = 0.0, mean = 0.0;
    std::vector<double> sigma(curve.points.size());
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        const VariancePoint& pt = curve.points[i];
        if (pt.sigma2 < 0.0) throw std::invalid_argument("ballistic_fit: negative sigma2");
        sigma[i] = std::sqrt(pt.sigma2);
        szz += pt.z_cm * pt.z_cm;
        szs += pt.z_cm * sigma[i];
        mean += sigma[i];
    }
    if (!(szz > 0.0)) throw std::invalid_argument("ballistic_fit: degenerate z grid");
    mean /= double(sigma.size());
    double slope = szs / szz;
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        double r = sigma[i] - slope * curve.points[i].z_cm;
        ss_res += r * r;
        ss_tot += (sigma[i] - mean) * (sigma[i] - mean);
    }
    double r2;
    if (ss_tot > 0.0)
        r2 = 1.0 - ss_res / ss_tot;
    else
        r2 = ss_res > 0.0 ? 0.0 : 1.0;
    return {slope, std::min(1.0, std::max(0.0, r2))};
}

// Total variation distance between two probability fields.
inline double total_variation(const ProbabilityField& a, const ProbabilityField& b) {
    if (a.p.size() != b.p.size())
        throw std::invalid_argument("total_variation: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.p.size(); ++i) s += std::abs(a.p[i] - b.p[i]);
    return 0.5 * s;
}

} // namespace dynloc
