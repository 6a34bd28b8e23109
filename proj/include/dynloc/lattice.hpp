#pragma once

// Lattice cross-sections (1D chain, triangular 2D patch), waveguide curvature
// profiles, and physical parameters. Cross-section lengths are in µm,
// propagation lengths in cm throughout.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynloc/errors.hpp"

namespace dynloc {

struct PhysicalParams {
    double n0 = 1.503;       // substrate refractive index
    double lambda_um = 0.78; // wavelength, µm
    double d_um = 15.0;      // nearest waveguide spacing, µm

    void validate() const {
        if (!(n0 >= 1.0)) throw config_error("params: n0 must be >= 1");
        if (!(lambda_um > 0.0)) throw config_error("params: lambda must be > 0");
        if (!(d_um > 0.0)) throw config_error("params: d must be > 0");
    }
};

enum class ProfileKind { straight, sinusoidal, sampled };

// Transverse waveguide displacement x_d(z). Sinusoidal: x_d = A sin(2πz/L).
// Sampled: x_d given at n+1 equally spaced z over one period [0, L], with
// x_d(0) = x_d(L); derivatives come from the sample grid where needed.
struct CurvatureProfile {
    ProfileKind kind = ProfileKind::straight;
    double A_um = 0.0;
    double L_cm = 1.0;
    std::vector<double> samples_um; // sampled kind only

    static CurvatureProfile straight() { return {}; }

    static CurvatureProfile sinusoidal(double A_um, double L_cm) {
        if (A_um == 0.0) {
            CurvatureProfile p = straight();
            p.L_cm = L_cm;
            return p;
        }
        CurvatureProfile p;
        p.kind = ProfileKind::sinusoidal;
        p.A_um = A_um;
        p.L_cm = L_cm;
        p.validate();
        return p;
    }

    static CurvatureProfile sampled(std::vector<double> samples_um, double L_cm) {
        CurvatureProfile p;
        p.kind = ProfileKind::sampled;
        p.L_cm = L_cm;
        p.samples_um = std::move(samples_um);
        p.A_um = 0.0;
        for (double s : p.samples_um) p.A_um = std::max(p.A_um, std::abs(s));
        p.validate();
        return p;
    }

    void validate() const {
        switch (kind) {
        case ProfileKind::straight:
            if (A_um != 0.0) throw config_error("profile: straight requires A = 0");
            break;
        case ProfileKind::sinusoidal:
            if (!(A_um > 0.0)) throw config_error("profile: sinusoidal requires A > 0");
            if (!(L_cm > 0.0)) throw config_error("profile: sinusoidal requires L > 0");
            break;
        case ProfileKind::sampled:
            if (!(L_cm > 0.0)) throw config_error("profile: sampled requires L > 0");
            if (samples_um.size() < 3) throw config_error("profile: sampled requires >= 3 samples");
            if (std::abs(samples_um.front() - samples_um.back()) >
                1e-9 * std::max(1.0, A_um))
                throw config_error("profile: sampled values must be periodic over L");
            break;
        }
    }

    bool is_periodic() const { return kind != ProfileKind::straight; }

    // dx_d/dz with both lengths in cm (dimensionless slope).
    double xdot(double z_cm) const {
        switch (kind) {
        case ProfileKind::straight:
            return 0.0;
        case ProfileKind::sinusoidal: {
            double w = 2.0 * kPiProfile / L_cm;
            return (A_um * 1e-4) * w * std::cos(w * z_cm);
        }
        default:
            throw std::invalid_argument("profile: analytic xdot undefined for sampled kind");
        }
    }

    // d²x_d/dz², cm⁻¹. For sampled profiles: periodic second differences at
    // the nodes, linearly interpolated in between.
    double xddot(double z_cm) const {
        switch (kind) {
        case ProfileKind::straight:
            return 0.0;
        case ProfileKind::sinusoidal: {
            double w = 2.0 * kPiProfile / L_cm;
            return -(A_um * 1e-4) * w * w * std::sin(w * z_cm);
        }
        case ProfileKind::sampled: {
            std::size_t n = samples_um.size() - 1; // intervals per period
            double h = L_cm / double(n);
            double zp = std::fmod(z_cm, L_cm);
            if (zp < 0.0) zp += L_cm;
            double t = zp / h;
            std::size_t k = std::min<std::size_t>(std::size_t(t), n - 1);
            double frac = t - double(k);
            return node_xddot(k, h) * (1.0 - frac) + node_xddot(k + 1, h) * frac;
        }
        }
        return 0.0;
    }

  private:
    static constexpr double kPiProfile = 3.14159265358979323846;

    double sample_cm(std::size_t k) const {
        std::size_t n = samples_um.size() - 1;
        return samples_um[k % n] * 1e-4; // front == back, wrap on the period
    }

    double node_xddot(std::size_t k, double h) const {
        std::size_t n = samples_um.size() - 1;
        std::size_t km = (k + n - 1) % n;
        return (sample_cm(k + 1) - 2.0 * sample_cm(k) + sample_cm(km)) / (h * h);
    }
};

enum class Spacing { d, sqrt3d, twod };
enum class Direction { h, h30, h60, v };
enum class LatticeDim { one_d, two_d };

inline double spacing_multiplier(Spacing s) {
    switch (s) {
    case Spacing::d: return 1.0;
    case Spacing::sqrt3d: return std::sqrt(3.0);
    case Spacing::twod: return 2.0;
    }
    return 0.0;
}

inline const char* to_string(Spacing s) {
    switch (s) {
    case Spacing::d: return "d";
    case Spacing::sqrt3d: return "sqrt3d";
    case Spacing::twod: return "2d";
    }
    return "?";
}

inline const char* to_string(Direction c) {
    switch (c) {
    case Direction::h: return "h";
    case Direction::h30: return "h30";
    case Direction::h60: return "h60";
    case Direction::v: return "v";
    }
    return "?";
}

inline Spacing spacing_from_string(const std::string& s) {
    if (s == "d") return Spacing::d;
    if (s == "sqrt3d") return Spacing::sqrt3d;
    if (s == "2d") return Spacing::twod;
    throw config_error("lattice: unknown spacing class '" + s + "'");
}

inline Direction direction_from_string(const std::string& s) {
    if (s == "h") return Direction::h;
    if (s == "h30") return Direction::h30;
    if (s == "h60") return Direction::h60;
    if (s == "v") return Direction::v;
    throw config_error("lattice: unknown direction class '" + s + "'");
}

// Angle of each direction class to the horizontal; ±θ and θ+180° fold into
// one class (the curvature is horizontal, only |cos θ| matters).
inline double direction_angle_deg(Direction c) {
    switch (c) {
    case Direction::h: return 0.0;
    case Direction::h30: return 30.0;
    case Direction::h60: return 60.0;
    case Direction::v: return 90.0;
    }
    return 0.0;
}

struct Site {
    int id;
    double x, y; // µm
};

struct Bond {
    int i, j; // site ids, i < j
    Spacing spacing;
    Direction direction;
};

struct Lattice {
    std::vector<Site> sites;
    std::vector<Bond> bonds;
    LatticeDim dimension = LatticeDim::one_d;
    double d_um = 0.0; // reference nearest spacing

    const Site& site(int id) const {
        if (id < 0 || std::size_t(id) >= sites.size())
            throw std::invalid_argument("lattice: site id out of range");
        return sites[std::size_t(id)];
    }
};

namespace detail {

inline constexpr double kPiLattice = 3.14159265358979323846;

struct BondClass {
    Spacing spacing;
    Direction direction;
};

// Classify a site pair by distance ratio (1, √3, 2 within 1e-9 relative) and
// folded angle to the horizontal (0/30/60/90° within 1e-9 rad). Returns false
// when the pair is not a bond (ratio beyond 2 or unmatched).
inline bool classify_pair(double dx, double dy, double d_um, BondClass* out) {
    double len = std::hypot(dx, dy);
    double ratio = len / d_um;
    Spacing sp;
    if (std::abs(ratio - 1.0) <= 1e-9)
        sp = Spacing::d;
    else if (std::abs(ratio - std::sqrt(3.0)) <= 1e-9 * std::sqrt(3.0))
        sp = Spacing::sqrt3d;
    else if (std::abs(ratio - 2.0) <= 2e-9)
        sp = Spacing::twod;
    else
        return false;

    double theta = std::atan2(std::abs(dy), std::abs(dx)); // folded to [0, π/2]
    static const double kTargets[4] = {0.0, kPiLattice / 6.0, kPiLattice / 3.0,
                                       kPiLattice / 2.0};
    static const Direction kDirs[4] = {Direction::h, Direction::h30, Direction::h60,
                                       Direction::v};
    for (int t = 0; t < 4; ++t) {
        if (std::abs(theta - kTargets[t]) <= 1e-9) {
            *out = {sp, kDirs[t]};
            return true;
        }
    }
    return false;
}

} // namespace detail

// 1D chain: sites on a horizontal line at spacing d, bonds all (d, h).
inline Lattice build_lattice_1d(int n_sites, double d_um) {
    if (n_sites < 2) throw std::invalid_argument("build_lattice_1d: need at least 2 sites");
    if (!(d_um > 0.0)) throw std::invalid_argument("build_lattice_1d: d must be > 0");
    Lattice lat;
    lat.dimension = LatticeDim::one_d;
    lat.d_um = d_um;
    lat.sites.reserve(std::size_t(n_sites));
    for (int i = 0; i < n_sites; ++i) lat.sites.push_back({i, i * d_um, 0.0});
    lat.bonds.reserve(std::size_t(n_sites) - 1);
    for (int i = 0; i + 1 < n_sites; ++i)
        lat.bonds.push_back({i, i + 1, Spacing::d, Direction::h});
    return lat;
}

// Triangular lattice from basis vectors (0, d) and (√3 d/2, d/2), truncated
// to the hexagonal patch max(|a|, |b|, |a+b|) <= radius_shells. Bonds are
// enumerated up to length 2d and classified into the six occurring
// (spacing, direction) pairs.
inline Lattice build_lattice_triangular(int radius_shells, double d_um) {
    if (radius_shells < 1)
        throw std::invalid_argument("build_lattice_triangular: need radius_shells >= 1");
    if (!(d_um > 0.0)) throw std::invalid_argument("build_lattice_triangular: d must be > 0");
    Lattice lat;
    lat.dimension = LatticeDim::two_d;
    lat.d_um = d_um;
    int R = radius_shells;
    int id = 0;
    for (int a = -R; a <= R; ++a)
        for (int b = -R; b <= R; ++b) {
            if (std::max({std::abs(a), std::abs(b), std::abs(a + b)}) > R) continue;
            double x = b * (std::sqrt(3.0) * 0.5 * d_um);
            double y = a * d_um + b * (0.5 * d_um);
            lat.sites.push_back({id++, x, y});
        }
    double cutoff = 2.0 * d_um * (1.0 + 1e-9);
    for (std::size_t i = 0; i < lat.sites.size(); ++i)
        for (std::size_t j = i + 1; j < lat.sites.size(); ++j) {
            double dx = lat.sites[j].x - lat.sites[i].x;
            double dy = lat.sites[j].y - lat.sites[i].y;
            if (std::abs(dx) > cutoff || std::abs(dy) > cutoff) continue;
            if (std::hypot(dx, dy) > cutoff) continue;
            detail::BondClass bc;
            if (!detail::classify_pair(dx, dy, d_um, &bc)) continue;
            lat.bonds.push_back({lat.sites[i].id, lat.sites[j].id, bc.spacing, bc.direction});
        }
    return lat;
}

// Site closest to the patch centroid (deterministic tie-break by id).
inline int central_site_id(const Lattice& lat) {
    if (lat.sites.empty()) throw std::invalid_argument("central_site_id: empty lattice");
    double cx = 0.0, cy = 0.0;
    for (const Site& s : lat.sites) {
        cx += s.x;
        cy += s.y;
    }
    cx /= double(lat.sites.size());
    cy /= double(lat.sites.size());
    int best = lat.sites.front().id;
    double best_d2 = std::numeric_limits<double>::max();
    for (const Site& s : lat.sites) {
        double d2 = (s.x - cx) * (s.x - cx) + (s.y - cy) * (s.y - cy);
        if (d2 < best_d2 - 1e-12 || (std::abs(d2 - best_d2) <= 1e-12 && s.id < best)) {
            best = s.id;
            best_d2 = d2;
        }
    }
    return best;
}

// ---- JSON interface: {sites:[{id,x,y}], bonds:[{i,j,spacing,direction}]} ----

inline nlohmann::json lattice_to_json(const Lattice& lat) {
    nlohmann::json sites = nlohmann::json::array();
    for (const Site& s : lat.sites) sites.push_back({{"id", s.id}, {"x", s.x}, {"y", s.y}});
    nlohmann::json bonds = nlohmann::json::array();
    for (const Bond& b : lat.bonds)
        bonds.push_back({{"i", b.i},
                         {"j", b.j},
                         {"spacing", to_string(b.spacing)},
                         {"direction", to_string(b.direction)}});
    return {{"sites", sites}, {"bonds", bonds}};
}

inline Lattice lattice_from_json(const nlohmann::json& j) {
    Lattice lat;
    try {
        for (const auto& js : j.at("sites"))
            lat.sites.push_back({js.at("id").get<int>(), js.at("x").get<double>(),
                                 js.at("y").get<double>()});
        for (const auto& jb : j.at("bonds"))
            lat.bonds.push_back({jb.at("i").get<int>(), jb.at("j").get<int>(),
                                 spacing_from_string(jb.at("spacing").get<std::string>()),
                                 direction_from_string(jb.at("direction").get<std::string>())});
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("lattice: malformed JSON: ") + e.what());
    }
    if (lat.sites.empty()) throw config_error("lattice: no sites");
    std::sort(lat.sites.begin(), lat.sites.end(),
              [](const Site& a, const Site& b) { return a.id < b.id; });
    for (std::size_t k = 0; k < lat.sites.size(); ++k)
        if (lat.sites[k].id != int(k))
            throw config_error("lattice: site ids must be 0..n-1 without gaps");

    bool planar = false;
    for (const Site& s : lat.sites)
        if (s.y != lat.sites.front().y) planar = true;
    lat.dimension = planar ? LatticeDim::two_d : LatticeDim::one_d;

    // reference spacing from the first nearest-neighbor bond
    for (const Bond& b : lat.bonds)
        if (b.spacing == Spacing::d) {
            const Site& si = lat.site(b.i);
            const Site& sj = lat.site(b.j);
            lat.d_um = std::hypot(sj.x - si.x, sj.y - si.y);
            break;
        }
    if (lat.d_um == 0.0 && !lat.bonds.empty())
        throw config_error("lattice: no nearest-neighbor bond to set the d spacing");
    if (lat.bonds.empty()) throw config_error("lattice: no bonds");

    // geometric consistency of every bond with its declared classes
    for (Bond& b : lat.bonds) {
        if (b.i == b.j) throw config_error("lattice: self bond");
        if (b.i > b.j) std::swap(b.i, b.j);
        const Site& si = lat.site(b.i);
        const Site& sj = lat.site(b.j);
        double dx = sj.x - si.x;
        double dy = sj.y - si.y;
        double len = std::hypot(dx, dy);
        double want = spacing_multiplier(b.spacing) * lat.d_um;
        if (std::abs(len - want) > 1e-9 * want)
            throw config_error("lattice: bond length does not match its spacing class");
        double theta = std::atan2(std::abs(dy), std::abs(dx));
        double want_theta = direction_angle_deg(b.direction) * detail::kPiLattice / 180.0;
        if (std::abs(theta - want_theta) > 1e-9)
            throw config_error("lattice: bond angle does not match its direction class");
    }
    return lat;
}

} // namespace dynloc
