#pragma once

// Effective coupling coefficients for straight and periodically-curved
// waveguide pairs: normalized optical frequency, Bessel renormalization,
// direction-resolved amplitudes, and the general period-average integral.

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "dynloc/bessel.hpp"
#include "dynloc/errors.hpp"
#include "dynloc/lattice.hpp"
#include "dynloc/quadrature.hpp"

namespace dynloc {

// Base coupling C0 per spacing class, either as an explicit table (cm⁻¹) or
// as an exponential decay law C(s) = c_ref · exp(-decay · (s - s_ref)).
struct CouplingModel {
    std::map<Spacing, double> table;

    struct ExpLaw {
        double c_ref;     // cm⁻¹ at s_ref
        double s_ref_um;  // µm
        double decay_per_um;
    };
    std::optional<ExpLaw> exp_law;

    void validate() const {
        for (const auto& [sp, c] : table) {
            (void)sp;
            if (!(c > 0.0)) throw config_error("coupling: table entries must be > 0");
        }
        if (exp_law) {
            if (!(exp_law->c_ref > 0.0)) throw config_error("coupling: exp_law c_ref must be > 0");
            if (!(exp_law->decay_per_um > 0.0))
                throw config_error("coupling: exp_law decay must be > 0 (monotone decreasing)");
        }
    }

    double base(Spacing sp, double d_um) const {
        auto it = table.find(sp);
        if (it != table.end()) return it->second;
        if (exp_law) {
            double s_um = spacing_multiplier(sp) * d_um;
            return exp_law->c_ref * std::exp(-exp_law->decay_per_um * (s_um - exp_law->s_ref_um));
        }
        throw config_error(std::string("coupling: no C0 for spacing class '") + to_string(sp) +
                           "' and no exp_law fallback");
    }
};

inline CouplingModel coupling_model_from_json(const nlohmann::json& j) {
    CouplingModel m;
    if (j.contains("couplings")) {
        const auto& t = j.at("couplings");
        for (auto it = t.begin(); it != t.end(); ++it)
            m.table[spacing_from_string(it.key())] = it.value().get<double>();
    }
    if (j.contains("exp_law")) {
        const auto& e = j.at("exp_law");
        m.exp_law = CouplingModel::ExpLaw{e.at("c_ref").get<double>(),
                                          e.at("s_ref").get<double>(),
                                          e.at("decay").get<double>()};
    }
    if (m.table.empty() && !m.exp_law)
        throw config_error("coupling: need \"couplings\" table or \"exp_law\"");
    m.validate();
    return m;
}

inline nlohmann::json coupling_model_to_json(const CouplingModel& m) {
    nlohmann::json j = nlohmann::json::object();
    if (!m.table.empty()) {
        nlohmann::json t = nlohmann::json::object();
        for (const auto& [sp, c] : m.table) t[to_string(sp)] = c;
        j["couplings"] = t;
    }
    if (m.exp_law)
        j["exp_law"] = {{"c_ref", m.exp_law->c_ref},
                        {"s_ref", m.exp_law->s_ref_um},
                        {"decay", m.exp_law->decay_per_um}};
    return j;
}

// ω = 2π n0 s / λ (dimensionless; spacing and λ in µm).
inline double normalized_frequency(const PhysicalParams& p, double spacing_um) {
    if (!(spacing_um > 0.0)) throw std::invalid_argument("normalized_frequency: spacing must be > 0");
    if (!(p.lambda_um > 0.0)) throw std::invalid_argument("normalized_frequency: lambda must be > 0");
    if (!(p.n0 >= 1.0)) throw std::invalid_argument("normalized_frequency: n0 must be >= 1");
    return 2.0 * kPi * p.n0 * spacing_um / p.lambda_um;
}

// Curvature amplitude projected onto a bond direction, A·cos θ. The cosines
// are exact so vertical bonds are unmodulated by construction.
inline double effective_amplitude(double A_um, Direction dir) {
    if (A_um < 0.0) throw std::invalid_argument("effective_amplitude: A must be >= 0");
    switch (dir) {
    case Direction::h: return A_um;
    case Direction::h30: return A_um * (std::sqrt(3.0) * 0.5);
    case Direction::h60: return A_um * 0.5;
    case Direction::v: return 0.0;
    }
    throw std::invalid_argument("effective_amplitude: unknown direction class");
}

// Dimensionless Bessel argument 2πωA/L after unit normalization (A µm -> cm).
inline double bessel_argument(double omega, double A_um, double L_cm) {
    if (!(L_cm > 0.0)) throw std::invalid_argument("bessel_argument: L must be > 0");
    if (A_um < 0.0) throw std::invalid_argument("bessel_argument: A must be >= 0");
    return 2.0 * kPi * omega * (A_um * 1e-4) / L_cm;
}

struct EffectiveCoupling {
    double value;             // cm⁻¹
    double modulation_factor; // dimensionless, |factor| <= 1
    Spacing spacing = Spacing::d;
    Direction direction = Direction::h;
};

// C_eff = C0 · J0(2πωA/L) for a sinusoidally-curved pair.
inline EffectiveCoupling effective_coupling_sinusoidal(double C0, double omega, double A_um,
                                                       double L_cm) {
    if (!(C0 > 0.0)) throw std::invalid_argument("effective_coupling: C0 must be > 0");
    if (!(L_cm > 0.0)) throw std::invalid_argument("effective_coupling: L must be > 0");
    if (A_um < 0.0) throw std::invalid_argument("effective_coupling: A must be >= 0");
    double factor = bessel_j0(bessel_argument(omega, A_um, L_cm));
    return {C0 * factor, factor};
}

// C_eff = (C0/L) ∫₀ᴸ cos[ω ẋ_d(z)] dz for an arbitrary periodic profile.
// Straight short-circuits to C0 exactly. Sampled profiles are integrated
// per sample interval with the interval's midpoint slope (the centered
// difference at that midpoint), so piecewise-linear profiles are exact when
// their kinks fall on sample nodes.
inline EffectiveCoupling effective_coupling_general(double C0, const CurvatureProfile& profile,
                                                    double omega) {
    if (!(C0 > 0.0)) throw std::invalid_argument("effective_coupling: C0 must be > 0");
    profile.validate();
    switch (profile.kind) {
    case ProfileKind::straight:
        return {C0, 1.0};
    case ProfileKind::sinusoidal: {
        double L = profile.L_cm;
        double factor =
            integrate([&](double z) { return std::cos(omega * profile.xdot(z)); }, 0.0, L,
                      1e-10) /
            L;
        return {C0 * factor, factor};
    }
    case ProfileKind::sampled: {
        std::size_t n = profile.samples_um.size() - 1;
        double h = profile.L_cm / double(n);
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            double slope =
                (profile.samples_um[k + 1] - profile.samples_um[k]) * 1e-4 / h;
            acc += std::cos(omega * slope) * h;
        }
        double factor = acc / profile.L_cm;
        return {C0 * factor, factor};
    }
    }
    throw std::invalid_argument("effective_coupling: unknown profile kind");
}

// Amplitude that zeroes C_eff: A* = j0,1 · L / (2πω), returned in µm.
inline double localizing_amplitude(double omega, double L_cm) {
    if (!(omega > 0.0)) throw std::invalid_argument("localizing_amplitude: omega must be > 0");
    if (!(L_cm > 0.0)) throw std::invalid_argument("localizing_amplitude: L must be > 0");
    return kJ0FirstZero * L_cm / (2.0 * kPi * omega) * 1e4;
}

} // namespace dynloc
