#pragma once

// JSON run-configuration parsing shared by the CLI commands. Every reader
// reports the offending field path in its error message. Relative paths in a
// config resolve against the config file's directory.

#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynloc/coupling.hpp"
#include "dynloc/errors.hpp"
#include "dynloc/io.hpp"
#include "dynloc/lattice.hpp"
#include "dynloc/transport.hpp"

namespace dynloc {

namespace detail {

template <class T>
T field(const nlohmann::json& j, const std::string& name, const std::string& ctx) {
    if (!j.contains(name)) throw config_error("config: missing field " + ctx + "." + name);
    try {
        return j.at(name).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw config_error("config: bad field " + ctx + "." + name + ": " + e.what());
    }
}

template <class T>
T field_or(const nlohmann::json& j, const std::string& name, const std::string& ctx, T dflt) {
    if (!j.contains(name)) return dflt;
    return field<T>(j, name, ctx);
}

} // namespace detail

inline Lattice parse_lattice(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    std::string kind = detail::field<std::string>(j, "kind", "lattice");
    if (kind == "chain")
        return build_lattice_1d(detail::field<int>(j, "n_sites", "lattice"),
                                detail::field<double>(j, "d", "lattice"));
    if (kind == "triangular")
        return build_lattice_triangular(detail::field<int>(j, "radius_shells", "lattice"),
                                        detail::field<double>(j, "d", "lattice"));
    if (kind == "file") {
        std::filesystem::path p = detail::field<std::string>(j, "path", "lattice");
        if (p.is_relative()) p = base_dir / p;
        return lattice_from_json(read_json_file(p.string()));
    }
    throw config_error("config: lattice.kind must be chain|triangular|file, got '" + kind + "'");
}

inline CurvatureProfile parse_profile(const nlohmann::json& j) {
    std::string kind = detail::field<std::string>(j, "kind", "profile");
    if (kind == "straight") return CurvatureProfile::straight();
    if (kind == "sinusoidal")
        return CurvatureProfile::sinusoidal(detail::field<double>(j, "A", "profile"),
                                            detail::field<double>(j, "L", "profile"));
    if (kind == "sampled")
        return CurvatureProfile::sampled(
            detail::field<std::vector<double>>(j, "samples", "profile"),
            detail::field<double>(j, "L", "profile"));
    throw config_error("config: profile.kind must be straight|sinusoidal|sampled, got '" + kind +
                       "'");
}

inline PhysicalParams parse_params(const nlohmann::json& j) {
    PhysicalParams p;
    p.n0 = detail::field<double>(j, "n0", "params");
    p.lambda_um = detail::field<double>(j, "lambda", "params");
    p.d_um = detail::field<double>(j, "d", "params");
    p.validate();
    return p;
}

inline int parse_injection(const nlohmann::json& j, const Lattice& lat) {
    if (!j.contains("injection")) return central_site_id(lat);
    const auto& inj = j.at("injection");
    if (inj.is_string()) {
        if (inj.get<std::string>() == "center") return central_site_id(lat);
        throw config_error("config: injection must be \"center\" or a site id");
    }
    if (!inj.is_number_integer()) throw config_error("config: injection must be \"center\" or a site id");
    int id = inj.get<int>();
    if (id < 0 || std::size_t(id) >= lat.sites.size())
        throw config_error("config: injection site id out of range");
    return id;
}

// "z": [..] (positive, strictly increasing) or {"start","stop","count"}.
inline std::vector<double> parse_z_grid(const nlohmann::json& j, const char* name = "z") {
    if (!j.contains(name)) throw config_error(std::string("config: missing field ") + name);
    const auto& jz = j.at(name);
    std::vector<double> z;
    if (jz.is_array()) {
        for (const auto& v : jz) {
            if (!v.is_number())
                throw config_error(std::string("config: ") + name + " entries must be numbers");
            z.push_back(v.get<double>());
        }
    } else if (jz.is_object()) {
        double start = detail::field<double>(jz, "start", name);
        double stop = detail::field<double>(jz, "stop", name);
        int count = detail::field<int>(jz, "count", name);
        if (count < 1) throw config_error(std::string("config: ") + name + ".count must be >= 1");
        for (int i = 0; i < count; ++i)
            z.push_back(count == 1 ? start : start + (stop - start) * i / double(count - 1));
    } else {
        throw config_error(std::string("config: ") + name + " must be an array or {start,stop,count}");
    }
    if (z.empty()) throw config_error(std::string("config: ") + name + " must not be empty");
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (!(z[i] > 0.0))
            throw config_error(std::string("config: ") + name + " values must be positive");
        if (i > 0 && !(z[i] > z[i - 1]))
            throw config_error(std::string("config: ") + name + " values must be strictly increasing");
    }
    return z;
}

struct RunConfig {
    nlohmann::json raw;
    std::filesystem::path base_dir;
    Lattice lattice;
    CurvatureProfile profile;
    CouplingModel coupling;
    PhysicalParams params;
    int injection = 0;
    double beta = 0.0;
};

// Common sections: lattice, coupling, params always; profile and injection
// optional (straight / centroid site by default).
inline RunConfig load_run_config(const std::string& path) {
    RunConfig rc;
    rc.raw = read_json_file(path);
    rc.base_dir = std::filesystem::absolute(std::filesystem::path(path)).parent_path();
    if (!rc.raw.contains("lattice")) throw config_error("config: missing field lattice");
    rc.lattice = parse_lattice(rc.raw.at("lattice"), rc.base_dir);
    rc.profile = rc.raw.contains("profile") ? parse_profile(rc.raw.at("profile"))
                                            : CurvatureProfile::straight();
    if (!rc.raw.contains("coupling")) throw config_error("config: missing field coupling");
    rc.coupling = coupling_model_from_json(rc.raw.at("coupling"));
    if (!rc.raw.contains("params")) throw config_error("config: missing field params");
    rc.params = parse_params(rc.raw.at("params"));
    if (std::abs(rc.params.d_um - rc.lattice.d_um) > 1e-9 * rc.params.d_um)
        throw config_error("config: params.d disagrees with the lattice spacing");
    rc.injection = parse_injection(rc.raw, rc.lattice);
    rc.beta = detail::field_or<double>(rc.raw, "beta", "config", 0.0);
    return rc;
}

} // namespace dynloc
