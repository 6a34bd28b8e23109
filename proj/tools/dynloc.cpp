// dynloc: simulate quantum walks on periodically-curved waveguide lattices
// and reduce the associated measurement data.
//
// Subcommands: simulate | variance-scan | localization-scan | memory |
//              gstats | ingest
// Exit codes:  0 success, 2 configuration error, 3 numerical-accuracy error,
//              4 I/O or parse error.

#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dynloc/config.hpp"
#include "dynloc/coupling.hpp"
#include "dynloc/errors.hpp"
#include "dynloc/evolution.hpp"
#include "dynloc/frame.hpp"
#include "dynloc/io.hpp"
#include "dynloc/lattice.hpp"
#include "dynloc/photon_stats.hpp"
#include "dynloc/transport.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    int threads = 1;
    std::uint64_t seed = 12345;
};

void add_common(CLI::App* cmd, CommonArgs* args) {
    cmd->add_option("--config", args->config_path, "JSON run configuration")->required();
    cmd->add_option("--out", args->out_dir, "output directory (created if missing)");
    cmd->add_option("--threads", args->threads, "worker threads for scans")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", args->seed, "RNG seed (commands that sample)");
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    int workers = std::max(1, std::min<int>(threads, int(n)));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    auto body = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(body);
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

fs::path prepare_out_dir(const std::string& out_dir) {
    fs::path p(out_dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw dynloc::io_error("cannot create output directory " + out_dir + ": " + ec.message());
    return p;
}

// Boundary adequacy: the hard-wall lattice must extend past the light cone.
void check_extent(const dynloc::RunConfig& rc, double z_max) {
    double c_max = 0.0;
    for (dynloc::Spacing sp : {dynloc::Spacing::d, dynloc::Spacing::sqrt3d, dynloc::Spacing::twod}) {
        bool present = false;
        for (const dynloc::Bond& b : rc.lattice.bonds)
            if (b.spacing == sp) {
                present = true;
                break;
            }
        if (present) c_max = std::max(c_max, rc.coupling.base(sp, rc.params.d_um));
    }
    int needed = dynloc::min_sites_beyond(c_max, z_max);
    const dynloc::Site& inj = rc.lattice.site(rc.injection);
    double ext_x = 0.0, ext_y = 0.0;
    for (const dynloc::Site& s : rc.lattice.sites) {
        ext_x = std::max(ext_x, std::abs(s.x - inj.x));
        ext_y = std::max(ext_y, std::abs(s.y - inj.y));
    }
    double have = rc.lattice.dimension == dynloc::LatticeDim::one_d
                      ? ext_x / rc.lattice.d_um
                      : std::min(ext_x, ext_y) / rc.lattice.d_um;
    if (have + 1e-9 < double(needed))
        throw dynloc::config_error(
            "config: lattice too small for z = " + dynloc::fmt(z_max) + " cm: need " +
            std::to_string(needed) + " sites beyond the injection site, have " +
            dynloc::fmt(have));
}

std::string probability_csv(const dynloc::Lattice& lat, const dynloc::ProbabilityField& field) {
    std::string out = "site_id,x,y,probability\n";
    for (std::size_t i = 0; i < lat.sites.size(); ++i) {
        const dynloc::Site& s = lat.sites[i];
        out += std::to_string(s.id) + "," + dynloc::fmt(s.x) + "," + dynloc::fmt(s.y) + "," +
               dynloc::fmt(field.p[i]) + "\n";
    }
    return out;
}

// ---- simulate --------------------------------------------------------------

int cmd_simulate(const CommonArgs& args) {
    dynloc::RunConfig rc = dynloc::load_run_config(args.config_path);
    std::vector<double> z = dynloc::parse_z_grid(rc.raw);
    check_extent(rc, z.back());
    fs::path out = prepare_out_dir(args.out_dir);

    dynloc::Hamiltonian H =
        dynloc::build_hamiltonian(rc.lattice, rc.coupling, rc.profile, rc.params, rc.beta);
    dynloc::SpectralPropagator prop(H);
    dynloc::StateVector psi0 = dynloc::StateVector::basis(int(rc.lattice.sites.size()), rc.injection);

    std::vector<std::string> files(z.size());
    parallel_for(z.size(), args.threads, [&](std::size_t i) {
        dynloc::ProbabilityField field = dynloc::probability_distribution(prop.evolve(psi0, z[i]));
        std::string name = "prob_z" + dynloc::fmt(z[i]) + ".csv";
        dynloc::write_text_file((out / name).string(), probability_csv(rc.lattice, field));
        files[i] = name;
    });

    json manifest = {{"command", "simulate"},
                     {"config", fs::absolute(args.config_path).string()},
                     {"sites", rc.lattice.sites.size()},
                     {"injection", rc.injection},
                     {"z", z},
                     {"files", files}};
    dynloc::write_text_file((out / "manifest.json").string(), manifest.dump(2) + "\n");
    return 0;
}

// ---- variance-scan ---------------------------------------------------------

int cmd_variance_scan(const CommonArgs& args) {
    dynloc::RunConfig rc = dynloc::load_run_config(args.config_path);
    std::vector<double> z = dynloc::parse_z_grid(rc.raw);
    check_extent(rc, z.back());
    fs::path out = prepare_out_dir(args.out_dir);

    dynloc::Hamiltonian H =
        dynloc::build_hamiltonian(rc.lattice, rc.coupling, rc.profile, rc.params, rc.beta);
    dynloc::SpectralPropagator prop(H);
    dynloc::StateVector psi0 = dynloc::StateVector::basis(int(rc.lattice.sites.size()), rc.injection);

    bool one_d = rc.lattice.dimension == dynloc::LatticeDim::one_d;
    json fit_report;
    std::string csv;

    if (one_d) {
        dynloc::Hamiltonian Hs = dynloc::build_hamiltonian(
            rc.lattice, rc.coupling, dynloc::CurvatureProfile::straight(), rc.params, rc.beta);
        dynloc::SpectralPropagator prop_straight(Hs);
        double C = rc.coupling.base(dynloc::Spacing::d, rc.params.d_um);
        double omega = dynloc::normalized_frequency(rc.params, rc.params.d_um);
        double A = rc.profile.kind == dynloc::ProfileKind::sinusoidal ? rc.profile.A_um : 0.0;
        double L = rc.profile.is_periodic() ? rc.profile.L_cm : 1.0;

        std::vector<double> sim(z.size()), straight(z.size()), analytic(z.size());
        parallel_for(z.size(), args.threads, [&](std::size_t i) {
            sim[i] = dynloc::variance(dynloc::probability_distribution(prop.evolve(psi0, z[i])),
                                      rc.lattice, dynloc::Axis::chain, rc.injection);
            straight[i] = dynloc::variance(
                dynloc::probability_distribution(prop_straight.evolve(psi0, z[i])), rc.lattice,
                dynloc::Axis::chain, rc.injection);
            analytic[i] = dynloc::variance_analytic_1d(C, z[i], omega, A, L);
        });

        csv = "z,axis,sigma2,sigma2_analytic,sigma2_straight,ratio\n";
        dynloc::VarianceCurve curve;
        curve.axis = dynloc::Axis::chain;
        for (std::size_t i = 0; i < z.size(); ++i) {
            csv += dynloc::fmt(z[i]) + ",chain," + dynloc::fmt(sim[i]) + "," +
                   dynloc::fmt(analytic[i]) + "," + dynloc::fmt(straight[i]) + "," +
                   dynloc::fmt(sim[i] / straight[i]) + "\n";
            curve.points.push_back({z[i], sim[i]});
        }
        if (z.size() >= 3) {
            dynloc::BallisticFit fit = dynloc::ballistic_fit(curve);
            fit_report["chain"] = {{"slope", fit.slope}, {"r_squared", fit.r_squared}};
        } else {
            fit_report["chain"] = nullptr;
        }
    } else {
        std::vector<double> var_h(z.size()), var_v(z.size());
        parallel_for(z.size(), args.threads, [&](std::size_t i) {
            dynloc::ProbabilityField field =
                dynloc::probability_distribution(prop.evolve(psi0, z[i]));
            var_h[i] = dynloc::variance(field, rc.lattice, dynloc::Axis::horizontal, rc.injection);
            var_v[i] = dynloc::variance(field, rc.lattice, dynloc::Axis::vertical, rc.injection);
        });
        csv = "z,axis,sigma2\n";
        dynloc::VarianceCurve ch{{}, dynloc::Axis::horizontal}, cv{{}, dynloc::Axis::vertical};
        for (std::size_t i = 0; i < z.size(); ++i) {
            csv += dynloc::fmt(z[i]) + ",horizontal," + dynloc::fmt(var_h[i]) + "\n";
            csv += dynloc::fmt(z[i]) + ",vertical," + dynloc::fmt(var_v[i]) + "\n";
            ch.points.push_back({z[i], var_h[i]});
            cv.points.push_back({z[i], var_v[i]});
        }
        if (z.size() >= 3) {
            dynloc::BallisticFit fh = dynloc::ballistic_fit(ch);
            dynloc::BallisticFit fv = dynloc::ballistic_fit(cv);
            fit_report["horizontal"] = {{"slope", fh.slope}, {"r_squared", fh.r_squared}};
            fit_report["vertical"] = {{"slope", fv.slope}, {"r_squared", fv.r_squared}};
        } else {
            fit_report["horizontal"] = nullptr;
            fit_report["vertical"] = nullptr;
        }
    }

    dynloc::write_text_file((out / "variance.csv").string(), csv);
    dynloc::write_text_file((out / "fit.json").string(), fit_report.dump(2) + "\n");
    return 0;
}

// ---- localization-scan -----------------------------------------------------

int cmd_localization_scan(const CommonArgs& args) {
    dynloc::RunConfig rc = dynloc::load_run_config(args.config_path);
    if (!rc.raw.contains("z") || !rc.raw.at("z").is_number())
        throw dynloc::config_error("config: localization-scan needs a single numeric z");
    double z = rc.raw.at("z").get<double>();
    if (!(z > 0.0)) throw dynloc::config_error("config: z must be positive");
    if (!rc.profile.is_periodic())
        throw dynloc::config_error("config: localization-scan needs a periodic profile (for L)");
    double L = rc.profile.L_cm;

    std::vector<double> A_grid;
    {
        const json& raw = rc.raw;
        if (!raw.contains("A_grid")) throw dynloc::config_error("config: missing field A_grid");
        const json& ja = raw.at("A_grid");
        if (ja.is_array()) {
            for (const auto& v : ja) {
                if (!v.is_number())
                    throw dynloc::config_error("config: A_grid entries must be numbers");
                A_grid.push_back(v.get<double>());
            }
        } else if (ja.is_object()) {
            double start = dynloc::detail::field<double>(ja, "start", "A_grid");
            double stop = dynloc::detail::field<double>(ja, "stop", "A_grid");
            int count = dynloc::detail::field<int>(ja, "count", "A_grid");
            if (count < 2) throw dynloc::config_error("config: A_grid.count must be >= 2");
            for (int i = 0; i < count; ++i)
                A_grid.push_back(start + (stop - start) * i / double(count - 1));
        } else {
            throw dynloc::config_error("config: A_grid must be an array or {start,stop,count}");
        }
        for (double a : A_grid)
            if (a < 0.0) throw dynloc::config_error("config: A_grid values must be >= 0");
    }
    check_extent(rc, z);
    fs::path out = prepare_out_dir(args.out_dir);

    double omega = dynloc::normalized_frequency(rc.params, rc.params.d_um);
    dynloc::StateVector psi0 = dynloc::StateVector::basis(int(rc.lattice.sites.size()), rc.injection);

    std::vector<double> factor(A_grid.size()), ret(A_grid.size());
    parallel_for(A_grid.size(), args.threads, [&](std::size_t i) {
        dynloc::CurvatureProfile prof = dynloc::CurvatureProfile::sinusoidal(A_grid[i], L);
        factor[i] = dynloc::bessel_j0(dynloc::bessel_argument(omega, A_grid[i], L));
        dynloc::Hamiltonian H =
            dynloc::build_hamiltonian(rc.lattice, rc.coupling, prof, rc.params, rc.beta);
        dynloc::ProbabilityField field =
            dynloc::probability_distribution(dynloc::evolve_static(H, psi0, z));
        ret[i] = field.p[std::size_t(rc.injection)];
    });

    std::string csv = "A,modulation_factor,return_probability\n";
    for (std::size_t i = 0; i < A_grid.size(); ++i)
        csv += dynloc::fmt(A_grid[i]) + "," + dynloc::fmt(factor[i]) + "," + dynloc::fmt(ret[i]) +
               "\n";
    dynloc::write_text_file((out / "localization.csv").string(), csv);

    json report = {{"command", "localization-scan"},
                   {"z", z},
                   {"A_star_um", dynloc::localizing_amplitude(omega, L)},
                   {"omega", omega}};
    dynloc::write_text_file((out / "localization_report.json").string(), report.dump(2) + "\n");
    return 0;
}

// ---- memory ----------------------------------------------------------------

int cmd_memory(const CommonArgs& args) {
    dynloc::RunConfig rc = dynloc::load_run_config(args.config_path);
    if (!rc.raw.contains("segments") || !rc.raw.at("segments").is_array() ||
        rc.raw.at("segments").empty())
        throw dynloc::config_error("config: memory needs a non-empty segments array");

    struct Segment {
        dynloc::CurvatureProfile profile;
        double length;
    };
    std::vector<Segment> segments;
    double total_straight = 0.0, total = 0.0;
    for (const auto& js : rc.raw.at("segments")) {
        Segment s;
        s.profile = js.contains("profile") ? dynloc::parse_profile(js.at("profile"))
                                           : dynloc::CurvatureProfile::straight();
        s.length = dynloc::detail::field<double>(js, "length", "segments[]");
        if (!(s.length > 0.0)) throw dynloc::config_error("config: segment length must be > 0");
        total += s.length;
        if (s.profile.kind == dynloc::ProfileKind::straight) total_straight += s.length;
        segments.push_back(std::move(s));
    }
    check_extent(rc, total);
    fs::path out = prepare_out_dir(args.out_dir);

    dynloc::StateVector psi = dynloc::StateVector::basis(int(rc.lattice.sites.size()), rc.injection);
    std::vector<dynloc::ProbabilityField> boundaries;
    std::vector<std::string> files;
    double zpos = 0.0;
    for (std::size_t k = 0; k < segments.size(); ++k) {
        dynloc::Hamiltonian H = dynloc::build_hamiltonian(rc.lattice, rc.coupling,
                                                          segments[k].profile, rc.params, rc.beta);
        psi = dynloc::evolve_static(H, psi, segments[k].length);
        zpos += segments[k].length;
        boundaries.push_back(dynloc::probability_distribution(psi));
        std::string name = "boundary_" + std::to_string(k + 1) + ".csv";
        dynloc::write_text_file((out / name).string(),
                                probability_csv(rc.lattice, boundaries.back()));
        files.push_back(name);
    }
    const dynloc::ProbabilityField& final_field = boundaries.back();

    // straight-only reference: total length of the straight segments
    json reference = nullptr;
    std::vector<dynloc::Axis> axes =
        rc.lattice.dimension == dynloc::LatticeDim::one_d
            ? std::vector<dynloc::Axis>{dynloc::Axis::chain}
            : std::vector<dynloc::Axis>{dynloc::Axis::horizontal, dynloc::Axis::vertical};
    json final_var, ref_var, rel_diff;
    if (total_straight > 0.0) {
        dynloc::Hamiltonian Hs = dynloc::build_hamiltonian(
            rc.lattice, rc.coupling, dynloc::CurvatureProfile::straight(), rc.params, rc.beta);
        dynloc::StateVector psi_ref = dynloc::evolve_static(
            Hs, dynloc::StateVector::basis(int(rc.lattice.sites.size()), rc.injection),
            total_straight);
        dynloc::ProbabilityField ref_field = dynloc::probability_distribution(psi_ref);
        for (dynloc::Axis ax : axes) {
            double fv = dynloc::variance(final_field, rc.lattice, ax, rc.injection);
            double rv = dynloc::variance(ref_field, rc.lattice, ax, rc.injection);
            final_var[dynloc::to_string(ax)] = fv;
            ref_var[dynloc::to_string(ax)] = rv;
            rel_diff[dynloc::to_string(ax)] =
                rv != 0.0 ? json(std::abs(fv - rv) / rv) : json(nullptr);
        }
        reference = {{"straight_length", total_straight},
                     {"sigma2", ref_var},
                     {"rel_diff", rel_diff}};
    } else {
        for (dynloc::Axis ax : axes)
            final_var[dynloc::to_string(ax)] =
                dynloc::variance(final_field, rc.lattice, ax, rc.injection);
    }

    json bmeta = json::array();
    double zacc = 0.0;
    for (std::size_t k = 0; k < segments.size(); ++k) {
        zacc += segments[k].length;
        bmeta.push_back({{"z", zacc},
                         {"file", files[k]},
                         {"tv_to_final", dynloc::total_variation(boundaries[k], final_field)}});
    }
    json report = {{"command", "memory"},
                   {"total_length", total},
                   {"final_sigma2", final_var},
                   {"straight_reference", reference},
                   {"boundaries", bmeta}};
    dynloc::write_text_file((out / "memory_report.json").string(), report.dump(2) + "\n");
    return 0;
}

// ---- gstats ----------------------------------------------------------------

int cmd_gstats(const CommonArgs& args) {
    json cfg = dynloc::read_json_file(args.config_path);
    fs::path base = fs::absolute(args.config_path).parent_path();
    fs::path out = prepare_out_dir(args.out_dir);
    json report;

    if (cfg.contains("counts_csv")) {
        fs::path p = cfg.at("counts_csv").get<std::string>();
        if (p.is_relative()) p = base / p;
        std::vector<dynloc::LabeledG2Input> rows = dynloc::read_counts_csv(p.string());
        std::map<std::string, dynloc::G2Value> by_label;
        json jrows = json::array();
        for (const dynloc::LabeledG2Input& row : rows) {
            dynloc::G2Value g;
            if (row.direct) {
                g.value = row.g;
                g.stddev = row.dg;
                g.stddev_defined = row.dg > 0.0;
            } else {
                g = dynloc::g2(row.record);
            }
            by_label[row.label] = g;
            json jr = {{"label", row.label}, {"g", g.value}};
            if (g.stddev_defined)
                jr["dg"] = g.stddev;
            else
                jr["dg"] = nullptr;
            jrows.push_back(jr);
        }
        report["records"] = jrows;
        if (by_label.count("ec") && by_label.count("ee") && by_label.count("cc")) {
            dynloc::CSViolation cs = dynloc::cauchy_schwarz_violation(
                by_label["ec"], by_label["ee"], by_label["cc"]);
            report["cauchy_schwarz"] = {{"statistic", cs.statistic},
                                        {"delta_total", cs.delta_total},
                                        {"n_sigma", cs.n_sigma}};
        }
    } else if (cfg.contains("synthetic")) {
        const json& s = cfg.at("synthetic");
        double rate_x = dynloc::detail::field<double>(s, "rate_x", "synthetic");
        double rate_y = dynloc::detail::field<double>(s, "rate_y", "synthetic");
        double T = dynloc::detail::field<double>(s, "T", "synthetic");
        double tau = dynloc::detail::field<double>(s, "tau", "synthetic");
        int trials = dynloc::detail::field_or<int>(s, "trials", "synthetic", 1);
        if (trials < 1) throw dynloc::config_error("config: synthetic.trials must be >= 1");
        json jtrials = json::array();
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            dynloc::CountRecord rec =
                dynloc::synth_poisson_pair(rate_x, rate_y, T, tau, args.seed + std::uint64_t(t));
            dynloc::G2Value g = dynloc::g2(rec);
            double dev = g.stddev_defined ? std::abs(g.value - 1.0) / g.stddev : 0.0;
            worst = std::max(worst, dev);
            jtrials.push_back({{"trial", t},
                               {"n_x", rec.n_x},
                               {"n_y", rec.n_y},
                               {"n_xy", rec.n_xy},
                               {"g", g.value},
                               {"dg", g.stddev_defined ? json(g.stddev) : json(nullptr)}});
        }
        report["synthetic"] = {{"trials", jtrials}, {"max_dev_sigma", worst}, {"seed", args.seed}};
    } else {
        throw dynloc::config_error("config: gstats needs counts_csv or synthetic");
    }

    dynloc::write_text_file((out / "g2_report.json").string(), report.dump(2) + "\n");
    return 0;
}

// ---- ingest ----------------------------------------------------------------

int cmd_ingest(const CommonArgs& args) {
    json cfg = dynloc::read_json_file(args.config_path);
    fs::path base = fs::absolute(args.config_path).parent_path();
    fs::path out = prepare_out_dir(args.out_dir);

    if (!cfg.contains("lattice")) throw dynloc::config_error("config: missing field lattice");
    dynloc::Lattice lat = dynloc::parse_lattice(cfg.at("lattice"), base);
    dynloc::Axis axis = dynloc::axis_from_string(
        dynloc::detail::field_or<std::string>(cfg, "axis", "config",
                                              lat.dimension == dynloc::LatticeDim::one_d
                                                  ? "chain"
                                                  : "horizontal"));
    int injection = dynloc::parse_injection(cfg, lat);

    fs::path mask_path = dynloc::detail::field<std::string>(cfg, "mask", "config");
    if (mask_path.is_relative()) mask_path = base / mask_path;
    dynloc::Mask mask = dynloc::mask_from_json(dynloc::read_json_file(mask_path.string()));

    std::vector<dynloc::BackgroundStrategy> strategies;
    if (!cfg.contains("strategies") || cfg.at("strategies") == "2d-default") {
        strategies = dynloc::default_strategies_2d();
    } else if (cfg.at("strategies") == "1d-default") {
        strategies = dynloc::default_strategies_1d();
    } else if (cfg.at("strategies").is_array()) {
        for (const auto& js : cfg.at("strategies"))
            strategies.push_back(
                {dynloc::corner_from_string(dynloc::detail::field<std::string>(js, "kind", "strategies[]")),
                 dynloc::detail::field<int>(js, "patch_w", "strategies[]"),
                 dynloc::detail::field<int>(js, "patch_h", "strategies[]")});
    } else {
        throw dynloc::config_error("config: strategies must be 1d-default, 2d-default, or an array");
    }

    if (!cfg.contains("frames") || !cfg.at("frames").is_array() || cfg.at("frames").empty())
        throw dynloc::config_error("config: ingest needs a non-empty frames array");

    for (const auto& jf : cfg.at("frames")) {
        fs::path fp = jf.get<std::string>();
        if (fp.is_relative()) fp = base / fp;
        std::istringstream in(dynloc::read_text_file(fp.string()));
        dynloc::Frame frame = dynloc::load_frame(in);

        // point estimate: the *-mean strategy when present, else the first
        dynloc::BackgroundStrategy point = strategies.front();
        for (const dynloc::BackgroundStrategy& st : strategies)
            if (st.kind == dynloc::Corner::four_corner_mean) point = st;
        dynloc::ProbabilityField field =
            dynloc::extract_probabilities(frame, mask, dynloc::estimate_background(frame, point));

        dynloc::VarianceReport rep =
            dynloc::variance_with_errorbars(frame, mask, lat, strategies, axis, injection);

        std::string stem = fp.stem().string();
        std::string csv = "site_id,probability\n";
        for (std::size_t k = 0; k < mask.rois.size(); ++k)
            csv += std::to_string(mask.rois[k].site_id) + "," + dynloc::fmt(field.p[k]) + "\n";
        dynloc::write_text_file((out / ("probabilities_" + stem + ".csv")).string(), csv);

        json jstr = json::array();
        for (const dynloc::StrategyVariance& sv : rep.per_strategy)
            jstr.push_back({{"strategy", sv.strategy},
                            {"background", sv.background},
                            {"sigma2", sv.sigma2}});
        json jrep = {{"frame", fp.string()},
                     {"axis", dynloc::to_string(axis)},
                     {"mean", rep.mean},
                     {"error", rep.error},
                     {"strategies", jstr}};
        dynloc::write_text_file((out / ("variance_" + stem + ".json")).string(),
                                jrep.dump(2) + "\n");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum walks on periodically-curved waveguide lattices"};
    app.require_subcommand(1);

    CommonArgs args;
    CLI::App* c_sim = app.add_subcommand("simulate", "evolve and dump per-z distributions");
    CLI::App* c_var = app.add_subcommand("variance-scan", "variance vs z, with 1D analytic overlay");
    CLI::App* c_loc = app.add_subcommand("localization-scan", "sweep curvature amplitude A");
    CLI::App* c_mem = app.add_subcommand("memory", "piecewise curved/straight composites");
    CLI::App* c_gst = app.add_subcommand("gstats", "g2 statistics and Cauchy-Schwarz report");
    CLI::App* c_ing = app.add_subcommand("ingest", "frames + mask -> probabilities + variance");
    for (CLI::App* c : {c_sim, c_var, c_loc, c_mem, c_gst, c_ing}) add_common(c, &args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_sim->parsed()) return cmd_simulate(args);
        if (c_var->parsed()) return cmd_variance_scan(args);
        if (c_loc->parsed()) return cmd_localization_scan(args);
        if (c_mem->parsed()) return cmd_memory(args);
        if (c_gst->parsed()) return cmd_gstats(args);
        if (c_ing->parsed()) return cmd_ingest(args);
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const dynloc::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const dynloc::accuracy_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const dynloc::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
