#pragma once

// ICCD-style data reduction: ASCII pixel frames, circular per-waveguide ROI
// masks, corner-patch background estimation, probability extraction, and the
// variance error bar from several background evaluations. A synthetic frame
// renderer (Gaussian spots + offset + tilt + Poisson noise) provides test
// fixtures, since raw experimental frames are not available.

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynloc/errors.hpp"
#include "dynloc/evolution.hpp"
#include "dynloc/lattice.hpp"
#include "dynloc/transport.hpp"

namespace dynloc {

struct Frame {
    int width = 0;
    int height = 0;
    std::vector<std::int64_t> counts; // row-major

    std::int64_t at(int row, int col) const { return counts[std::size_t(row) * width + col]; }
    std::int64_t& at(int row, int col) { return counts[std::size_t(row) * width + col]; }
};

// Whitespace-separated integer rows, one row per line. Rectangular.
inline Frame load_frame(std::istream& in) {
    Frame f;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        std::vector<std::int64_t> row;
        std::string tok;
        while (ls >> tok) {
            try {
                std::size_t pos = 0;
                long long v = std::stoll(tok, &pos);
                if (pos != tok.size()) throw std::invalid_argument(tok);
                if (v < 0) throw io_error("frame: negative count at line " + std::to_string(lineno));
                row.push_back(v);
            } catch (const io_error&) {
                throw;
            } catch (const std::exception&) {
                throw io_error("frame: non-integer token '" + tok + "' at line " +
                               std::to_string(lineno));
            }
        }
        if (f.width == 0) {
            f.width = int(row.size());
        } else if (int(row.size()) != f.width) {
            throw io_error("frame: ragged row at line " + std::to_string(lineno) + " (expected " +
                           std::to_string(f.width) + " columns, got " +
                           std::to_string(row.size()) + ")");
        }
        f.counts.insert(f.counts.end(), row.begin(), row.end());
        ++f.height;
    }
    if (f.width == 0 || f.height == 0) throw io_error("frame: empty input");
    return f;
}

inline void dump_frame(const Frame& f, std::ostream& out) {
    for (int r = 0; r < f.height; ++r) {
        for (int c = 0; c < f.width; ++c) {
            if (c) out << ' ';
            out << f.at(r, c);
        }
        out << '\n';
    }
}

struct Roi {
    int site_id;
    double cx, cy, r; // px
};

struct Mask {
    std::vector<Roi> rois;
};

inline Mask mask_from_json(const nlohmann::json& j) {
    Mask m;
    try {
        for (const auto& e : j)
            m.rois.push_back({e.at("site_id").get<int>(), e.at("cx").get<double>(),
                              e.at("cy").get<double>(), e.at("r").get<double>()});
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("mask: malformed JSON: ") + e.what());
    }
    if (m.rois.empty()) throw config_error("mask: no ROIs");
    for (const Roi& roi : m.rois)
        if (!(roi.r > 0.0)) throw config_error("mask: ROI radius must be > 0");
    return m;
}

inline nlohmann::json mask_to_json(const Mask& m) {
    nlohmann::json j = nlohmann::json::array();
    for (const Roi& roi : m.rois)
        j.push_back({{"site_id", roi.site_id}, {"cx", roi.cx}, {"cy", roi.cy}, {"r", roi.r}});
    return j;
}

inline void validate_mask_bounds(const Mask& m, const Frame& f) {
    for (const Roi& roi : m.rois)
        if (roi.cx - roi.r < 0.0 || roi.cx + roi.r > double(f.width) || roi.cy - roi.r < 0.0 ||
            roi.cy + roi.r > double(f.height))
            throw config_error("mask: ROI for site " + std::to_string(roi.site_id) +
                               " extends outside the frame");
}

enum class Corner { up_left, up_right, down_left, down_right, four_corner_mean };

inline const char* to_string(Corner c) {
    switch (c) {
    case Corner::up_left: return "up-left";
    case Corner::up_right: return "up-right";
    case Corner::down_left: return "down-left";
    case Corner::down_right: return "down-right";
    case Corner::four_corner_mean: return "four-corner-mean";
    }
    return "?";
}

inline Corner corner_from_string(const std::string& s) {
    if (s == "up-left") return Corner::up_left;
    if (s == "up-right") return Corner::up_right;
    if (s == "down-left") return Corner::down_left;
    if (s == "down-right") return Corner::down_right;
    if (s == "four-corner-mean") return Corner::four_corner_mean;
    throw config_error("background: unknown strategy '" + s + "'");
}

struct BackgroundStrategy {
    Corner kind = Corner::four_corner_mean;
    int patch_w = 90;
    int patch_h = 90;
};

namespace detail {

inline double patch_mean(const Frame& f, int row0, int col0, int w, int h) {
    double s = 0.0;
    for (int r = row0; r < row0 + h; ++r)
        for (int c = col0; c < col0 + w; ++c) s += double(f.at(r, c));
    return s / (double(w) * double(h));
}

} // namespace detail

// Mean count of the selected corner patch; four-corner-mean averages the
// four patch means. Rows count from the top (row 0 = "up").
inline double estimate_background(const Frame& f, const BackgroundStrategy& strategy) {
    int w = strategy.patch_w, h = strategy.patch_h;
    if (w < 1 || h < 1 || w > f.width || h > f.height)
        throw std::invalid_argument("estimate_background: patch does not fit in frame");
    switch (strategy.kind) {
    case Corner::up_left: return detail::patch_mean(f, 0, 0, w, h);
    case Corner::up_right: return detail::patch_mean(f, 0, f.width - w, w, h);
    case Corner::down_left: return detail::patch_mean(f, f.height - h, 0, w, h);
    case Corner::down_right: return detail::patch_mean(f, f.height - h, f.width - w, w, h);
    case Corner::four_corner_mean:
        return 0.25 * (detail::patch_mean(f, 0, 0, w, h) +
                       detail::patch_mean(f, 0, f.width - w, w, h) +
                       detail::patch_mean(f, f.height - h, 0, w, h) +
                       detail::patch_mean(f, f.height - h, f.width - w, w, h));
    }
    throw std::invalid_argument("estimate_background: unknown strategy");
}

// Per-ROI sum of max(count - background, 0) over pixels whose center lies
// inside the circle, normalized to Σ = 1. Pixel (r, c) has center
// (c + 0.5, r + 0.5).
inline ProbabilityField extract_probabilities(const Frame& f, const Mask& mask,
                                              double background) {
    validate_mask_bounds(mask, f);
    ProbabilityField field;
    field.p.resize(mask.rois.size(), 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < mask.rois.size(); ++k) {
        const Roi& roi = mask.rois[k];
        int c0 = std::max(0, int(std::floor(roi.cx - roi.r - 1.0)));
        int c1 = std::min(f.width - 1, int(std::ceil(roi.cx + roi.r)));
        int r0 = std::max(0, int(std::floor(roi.cy - roi.r - 1.0)));
        int r1 = std::min(f.height - 1, int(std::ceil(roi.cy + roi.r)));
        double s = 0.0;
        for (int r = r0; r <= r1; ++r)
            for (int c = c0; c <= c1; ++c) {
                double px = c + 0.5, py = r + 0.5;
                double dx = px - roi.cx, dy = py - roi.cy;
                if (dx * dx + dy * dy > roi.r * roi.r) continue;
                double v = double(f.at(r, c)) - background;
                if (v > 0.0) s += v;
            }
        field.p[k] = s;
        total += s;
    }
    if (!(total > 0.0))
        throw accuracy_error("extract_probabilities: no signal above background in any ROI");
    for (double& v : field.p) v /= total;
    return field;
}

// Default strategy sets for the two detector layouts.
inline std::vector<BackgroundStrategy> default_strategies_2d() {
    return {{Corner::up_left, 90, 90},
            {Corner::up_right, 90, 90},
            {Corner::down_left, 90, 90},
            {Corner::down_right, 90, 90},
            {Corner::four_corner_mean, 90, 90}};
}

inline std::vector<BackgroundStrategy> default_strategies_1d() {
    return {{Corner::up_left, 60, 30}, {Corner::up_right, 60, 30},
            {Corner::four_corner_mean, 60, 30}};
}

struct StrategyVariance {
    std::string strategy;
    double background;
    double sigma2;
};

struct VarianceReport {
    double mean = 0.0;
    double error = 0.0; // population stddev across strategies
    std::vector<StrategyVariance> per_strategy;
};

// Variance per background strategy; mean and population standard deviation
// across the evaluations form the error bar.
inline VarianceReport variance_with_errorbars(const Frame& f, const Mask& mask,
                                              const Lattice& lat,
                                              const std::vector<BackgroundStrategy>& strategies,
                                              Axis axis, int injection_site) {
    if (strategies.size() < 2)
        throw std::invalid_argument("variance_with_errorbars: need >= 2 strategies");
    if (mask.rois.size() != lat.sites.size())
        throw std::invalid_argument("variance_with_errorbars: mask/lattice size mismatch");
    for (std::size_t k = 0; k < mask.rois.size(); ++k)
        if (mask.rois[k].site_id != lat.sites[k].id)
            throw std::invalid_argument("variance_with_errorbars: mask ROI order must match site ids");

    VarianceReport rep;
    for (const BackgroundStrategy& st : strategies) {
        double bg = estimate_background(f, st);
        ProbabilityField field = extract_probabilities(f, mask, bg);
        double s2 = variance(field, lat, axis, injection_site);
        rep.per_strategy.push_back({to_string(st.kind), bg, s2});
        rep.mean += s2;
    }
    rep.mean /= double(rep.per_strategy.size());
    double acc = 0.0;
    for (const StrategyVariance& sv : rep.per_strategy)
        acc += (sv.sigma2 - rep.mean) * (sv.sigma2 - rep.mean);
    rep.error = std::sqrt(acc / double(rep.per_strategy.size()));
    return rep;
}

struct RenderSpec {
    int width = 0;
    int height = 0;
    double spot_sigma_px = 3.0;
    double amplitude = 1e5;  // peak counts of a p = 1 spot
    double offset = 0.0;     // uniform background counts
    double tilt_x = 0.0;     // counts per px, centered on the frame
    double tilt_y = 0.0;
    bool poisson = true;
    std::uint64_t seed = 0;
};

// Gaussian spot per ROI (weight = its probability) over a tilted constant
// background, optionally Poisson-sampled. The fixture ground truth for the
// ingest round trip.
inline Frame render_frame(const Mask& mask, const ProbabilityField& field,
                          const RenderSpec& spec) {
    if (mask.rois.size() != field.p.size())
        throw std::invalid_argument("render_frame: mask/field size mismatch");
    if (spec.width < 1 || spec.height < 1)
        throw std::invalid_argument("render_frame: bad frame size");
    Frame f;
    f.width = spec.width;
    f.height = spec.height;
    f.counts.assign(std::size_t(spec.width) * spec.height, 0);
    std::mt19937_64 rng(spec.seed);
    double s2 = 2.0 * spec.spot_sigma_px * spec.spot_sigma_px;
    for (int r = 0; r < spec.height; ++r)
        for (int c = 0; c < spec.width; ++c) {
            double px = c + 0.5, py = r + 0.5;
            double lam = spec.offset + spec.tilt_x * (px - 0.5 * spec.width) +
                         spec.tilt_y * (py - 0.5 * spec.height);
            for (std::size_t k = 0; k < mask.rois.size(); ++k) {
                double dx = px - mask.rois[k].cx, dy = py - mask.rois[k].cy;
                double d2 = dx * dx + dy * dy;
                if (d2 > 9.0 * s2) continue; // beyond ~4.2σ: negligible
                lam += spec.amplitude * field.p[k] * std::exp(-d2 / s2);
            }
            if (lam < 0.0) lam = 0.0;
            std::int64_t v;
            if (spec.poisson) {
                std::poisson_distribution<std::int64_t> pd(lam);
                v = lam > 0.0 ? pd(rng) : 0;
            } else {
                v = std::llround(lam);
            }
            f.at(r, c) = v;
        }
    return f;
}

} // namespace dynloc
