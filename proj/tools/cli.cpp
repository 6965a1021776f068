#include "cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli_support.hpp"
#include "declutter/certify.hpp"
#include "declutter/evaluation.hpp"
#include "declutter/io.hpp"
#include "declutter/parallel.hpp"
#include "declutter/report.hpp"

namespace declutter::cli {

namespace {

using nlohmann::json;

/// Every option of the app and the active subcommand, with its given or default value.
json collect_config(const CLI::App& app, const CLI::App* sub) {
    json config;
    auto add = [&](const CLI::App& a, json& target) {
        for (const CLI::Option* opt : a.get_options()) {
            const auto& names = opt->get_lnames();
            if (names.empty() || names.front() == "help") {
                continue;
            }
            if (opt->count() > 0) {
                const auto& results = opt->results();
                target[names.front()] = results.size() == 1 ? json(results.front()) : json(results);
            } else if (opt->get_expected_min() == 0) {
                target[names.front()] = false;
            } else {
                target[names.front()] = opt->get_default_str();
            }
        }
        for (const CLI::Option* opt : a.get_options()) {
            if (opt->get_lnames().empty() && !opt->get_name().empty() && opt->count() > 0) {
                target[opt->get_name()] = opt->results();
            }
        }
    };
    add(app, config);
    if (sub) {
        config["subcommand"] = sub->get_name();
        add(*sub, config["options"]);
    }
    return config;
}

std::vector<std::vector<double>> parse_vertices(const std::string& text) {
    std::vector<std::vector<double>> vertices;
    std::stringstream rows(text);
    std::string row;
    while (std::getline(rows, row, ';')) {
        if (row.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        std::stringstream cells(row + "\n");
        const auto cloud = io::read_points(cells);
        auto p = cloud.point(0);
        vertices.emplace_back(p.begin(), p.end());
    }
    return vertices;
}

struct GenOptions {
    std::string shape = "circle";
    std::vector<double> center{0.0, 0.0};
    double radius = 1.0;
    std::string vertices;
    bool closed = false;
    double big_radius = 1.0;
    double loop_radius = 0.15;
    std::size_t loops = 16;
    double major = 2.0;
    double minor = 0.7;
    std::size_t count = 1000;
    std::string mode = "random";
    std::vector<double> feature_anchor;
    double feature_floor = 0.1;
    double sigma = 0.0;
    std::size_t ambient = 0;
    double margin = 0.1;
    std::size_t reference_factor = 10;
    std::string out_dir;
};

synth::ShapeSpec make_shape(const GenOptions& o) {
    if (o.shape == "circle") {
        return synth::Circle{o.center, o.radius};
    }
    if (o.shape == "polyline") {
        return synth::Polyline{parse_vertices(o.vertices), o.closed};
    }
    if (o.shape == "loops") {
        return synth::TwoScaleLoops{o.big_radius, o.loop_radius, o.loops};
    }
    if (o.shape == "torus") {
        return synth::Torus{o.major, o.minor};
    }
    throw Error("unknown shape '" + o.shape + "'");
}

int run_gen(const GenOptions& o, const CommonOptions& common, const json& config, std::ostream& out) {
    synth::GeneratorConfig gc;
    gc.shape = make_shape(o);
    gc.count = o.count;
    gc.mode = synth::sampling_mode_from_string(o.mode);
    if (!o.feature_anchor.empty() || gc.mode == synth::SamplingMode::adaptive) {
        auto anchor = o.feature_anchor;
        if (anchor.empty()) {
            anchor.assign(synth::shape_dimension(gc.shape), 0.0);
        }
        gc.feature = synth::FeatureSizeSpec{anchor, o.feature_floor};
    }
    gc.sigma = o.sigma;
    gc.ambient_count = o.ambient;
    gc.ambient_margin = o.margin;
    gc.seed = common.seed;
    gc.reference_factor = o.reference_factor;
    const auto sample = synth::generate(gc);

    const std::filesystem::path dir(o.out_dir);
    ensure_directory(dir);
    io::write_points_file((dir / "points.csv").string(), sample.points);
    io::write_points_file((dir / "reference.csv").string(), sample.reference.points);
    {
        std::ofstream tags(dir / "tags.csv");
        tags << "# id,tag\n";
        for (std::size_t i = 0; i < sample.tags.size(); ++i) {
            tags << i << ',' << synth::to_string(sample.tags[i]) << '\n';
        }
    }
    if (sample.reference.feature_size) {
        std::ofstream f(dir / "feature.csv");
        std::vector<PointId> ids(sample.reference.points.size());
        std::iota(ids.begin(), ids.end(), PointId{0});
        io::write_id_values(f, ids, *sample.reference.feature_size, "feature_size");
    }
    auto report = report_envelope(config);
    report["generator"] = to_json(gc);
    report["signal_count"] = sample.ids_with(synth::PointTag::signal).size();
    report["ambient_count"] = sample.ids_with(synth::PointTag::ambient).size();
    report["reference_count"] = sample.reference.points.size();
    write_json_file((dir / "spec.json").string(), report);
    out << "wrote " << sample.points.size() << " points (" << report["ambient_count"].get<std::size_t>()
        << " ambient) and " << sample.reference.points.size() << " reference points to " << dir.string() << '\n';
    return exit_ok;
}

struct InputOptions {
    std::string input;
    std::string matrix;
    std::string output;
    std::string ids_output;
    std::string report;
    std::string svg;
};

void add_input_options(CLI::App* sub, InputOptions& o) {
    auto* in = sub->add_option("--input,-i", o.input, "Point file (CSV or whitespace separated)");
    auto* mx = sub->add_option("--matrix", o.matrix, "Distance matrix file (CSV, n x n)");
    in->excludes(mx);
    mx->excludes(in);
    sub->add_option("--output,-o", o.output, "Write the selected points here");
    sub->add_option("--ids-output", o.ids_output, "Write the selected point ids here");
    sub->add_option("--report", o.report, "Write a JSON report here");
    sub->add_option("--svg", o.svg, "Write an SVG scatter plot here (2D inputs only)");
}

void write_outputs(const InputOptions& o, const LoadedInput& in, std::span<const PointId> ids, std::ostream& out) {
    if (!o.output.empty()) {
        write_selection(o.output, in.cloud, ids);
    }
    if (!o.ids_output.empty()) {
        write_ids(o.ids_output, ids);
    }
    if (!o.svg.empty()) {
        write_svg(o.svg, in.cloud, ids, out);
    }
}

int run_declutter(const InputOptions& o, std::size_t k, double vicinity, const std::string& profile_csv,
                  const CommonOptions& common, const json& config, std::ostream& out) {
    const auto in = load_input(o.input, o.matrix, common);
    const NeighborIndex index(in.cloud, in.metric, in.strategy);
    const auto result = declutter::declutter(index, k, distance_kind_from_string(common.kind), vicinity);
    const auto kept = result.kept_sorted();
    write_outputs(o, in, kept, out);
    if (!profile_csv.empty()) {
        std::ofstream csv(profile_csv);
        if (!csv) {
            throw Error("cannot open '" + profile_csv + "' for writing");
        }
        write_profile_csv(csv, result.profile);
    }
    if (!o.report.empty()) {
        auto report = report_envelope(config);
        report["result"] = to_json(result);
        write_json_file(o.report, report);
    }
    out << "kept " << kept.size() << " of " << in.cloud.size() << " points (k=" << k << ", " << common.kind
        << ")\n";
    return exit_ok;
}

int run_parfree(const InputOptions& o, double resampling_constant, const std::string& dump_dir,
                const CommonOptions& common, const json& config, std::ostream& out) {
    const auto in = load_input(o.input, o.matrix, common);
    const auto result = parfree_declutter(in.cloud, in.metric, distance_kind_from_string(common.kind),
                                          resampling_constant, in.strategy);
    write_outputs(o, in, result.output, out);
    if (!dump_dir.empty()) {
        const std::filesystem::path dir(dump_dir);
        ensure_directory(dir);
        for (const auto& step : result.trace.iterations) {
            const std::string stem = "level_" + std::to_string(step.level);
            write_selection((dir / (stem + "_input.csv")).string(), in.cloud, step.input);
            write_selection((dir / (stem + "_kept.csv")).string(), in.cloud, step.decluttered.kept_sorted());
            write_selection((dir / (stem + "_resampled.csv")).string(), in.cloud, step.resampled);
        }
    }
    if (!o.report.empty()) {
        auto report = report_envelope(config);
        report["trace"] = to_json(result.trace, !dump_dir.empty());
        report["output"] = result.output;
        write_json_file(o.report, report);
    }
    out << "level    k  input   kept  resampled\n";
    for (const auto& step : result.trace.iterations) {
        out << std::setw(5) << step.level << std::setw(5) << step.k << std::setw(7) << step.input.size()
            << std::setw(7) << step.decluttered.kept.size() << std::setw(11) << step.resampled.size() << '\n';
    }
    if (result.trace.degenerate) {
        out << "degenerate input (fewer than 2 points): returned unchanged\n";
    }
    out << "output " << result.output.size() << " of " << in.cloud.size() << " points (C=" << resampling_constant
        << ")\n";
    return exit_ok;
}

struct CertifyOptions {
    std::string input;
    std::string reference;
    std::string feature;
    std::vector<std::size_t> ks;
    std::string report;
};

void print_certificate_header(std::ostream& out) {
    out << std::setw(6) << "k" << std::setw(14) << "epsilon_k" << std::setw(14) << "coverage" << std::setw(14)
        << "noise" << std::setw(12) << "c" << std::setw(12) << "weak_c" << std::setw(10) << "uniform2" << '\n';
}

void print_certificate(std::ostream& out, const SamplingCertificate& c) {
    auto opt = [](const std::optional<double>& v) {
        if (!v) {
            return std::string("-");
        }
        std::ostringstream s;
        s << std::setprecision(6) << *v;
        return s.str();
    };
    out << std::setw(6) << c.k << std::setw(14) << std::setprecision(6) << c.epsilon_k << std::setw(14)
        << c.coverage_term << std::setw(14) << c.noise_term << std::setw(12) << opt(c.uniformity_c)
        << std::setw(12) << opt(c.weak_uniformity_c) << std::setw(10)
        << (c.is_uniform(2.0) ? "yes" : "no") << '\n';
}

int run_certify(const CertifyOptions& o, const CommonOptions& common, const json& config, std::ostream& out) {
    const auto in = load_input(o.input, "", common);
    const auto ref = load_reference(o.reference, o.feature);
    const auto kind = distance_kind_from_string(common.kind);
    json certs = json::array();
    print_certificate_header(out);
    for (std::size_t k : o.ks) {
        const auto cert = certify(in.cloud, in.metric, ref, k, kind);
        print_certificate(out, cert);
        certs.push_back(to_json(cert));
    }
    if (!o.report.empty()) {
        auto report = report_envelope(config);
        report["certificates"] = certs;
        write_json_file(o.report, report);
    }
    return exit_ok;
}

struct EvalOptions {
    CertifyOptions certify;
    bool parfree = false;
    bool strict = false;
};

void print_bound(std::ostream& out, const BoundCertificate& c, const std::string& scale) {
    out << std::left << std::setw(30) << to_string(c.name) << std::setw(8) << scale << std::setw(6)
        << to_string(c.status) << std::right;
    if (c.applicable()) {
        out << std::setw(14) << std::setprecision(6) << c.lhs << std::setw(14) << c.rhs;
    } else {
        out << "  " << c.note;
    }
    out << '\n';
}

int run_eval(const EvalOptions& o, const CommonOptions& common, const json& config, std::ostream& out) {
    const auto in = load_input(o.certify.input, "", common);
    const auto ref = load_reference(o.certify.reference, o.certify.feature);
    const GroundTruthRef plain_ref{ref.points, std::nullopt};
    const auto kind = distance_kind_from_string(common.kind);
    const NeighborIndex index(in.cloud, in.metric, in.strategy);

    json bounds = json::array();
    bool failed = false;
    auto record = [&](const BoundCertificate& c, const std::string& scale) {
        print_bound(out, c, scale);
        auto j = to_json(c);
        j["scale"] = scale;
        bounds.push_back(j);
        failed = failed || c.status == BoundStatus::fail;
    };

    out << std::left << std::setw(30) << "bound" << std::setw(8) << "scale" << std::setw(6) << "status"
        << std::right << std::setw(14) << "lhs" << std::setw(14) << "rhs" << '\n';
    for (std::size_t k : o.certify.ks) {
        const auto cert = certify(in.cloud, in.metric, plain_ref, k, kind);
        const auto result = declutter::declutter(index, k, kind);
        const auto resampled =
            resample_step(index, result.kept, result.profile, theoretical_resampling_constant);
        BoundInputs bi;
        bi.cloud = &in.cloud;
        bi.metric = in.metric;
        bi.reference = &plain_ref;
        bi.certificate = &cert;
        bi.declutter = &result;
        bi.resampled = &resampled;
        bi.tail_k = k;
        const std::string scale = "k=" + std::to_string(k);
        for (auto name : {BoundName::declutter_hausdorff, BoundName::declutter_coverage,
                          BoundName::declutter_outlier_removal, BoundName::declutter_separation,
                          BoundName::relaxed_declutter_hausdorff, BoundName::knn_tail,
                          BoundName::resample_step_hausdorff}) {
            record(verify_bound(name, bi), scale);
        }
        if (ref.adaptive()) {
            const auto adaptive_cert = certify(in.cloud, in.metric, ref, k, kind);
            bi.reference = &ref;
            bi.certificate = &adaptive_cert;
            record(verify_bound(BoundName::declutter_adaptive_hausdorff, bi), scale);
        }
    }

    if (o.parfree) {
        const auto result =
            parfree_declutter(in.cloud, in.metric, kind, theoretical_resampling_constant, in.strategy);
        BoundInputs bi;
        bi.cloud = &in.cloud;
        bi.metric = in.metric;
        bi.reference = &plain_ref;
        bi.parfree = &result;
        if (!result.trace.degenerate) {
            for (int level = initial_level(in.cloud.size()); level >= 1; --level) {
                bi.scale_certificates.push_back(
                    certify(in.cloud, in.metric, plain_ref, std::size_t{1} << level, DistanceKind::rms));
            }
        }
        const auto levels = valid_base_levels(bi.scale_certificates, in.cloud.size());
        if (levels.empty()) {
            bi.base_level.reset();
            record(verify_bound(BoundName::parfree_hausdorff, bi), "parfree");
        }
        for (int level : levels) {
            bi.base_level = level;
            record(verify_bound(BoundName::parfree_hausdorff, bi), "i0=" + std::to_string(level));
        }
        record(verify_bound(BoundName::parfree_conservation, bi), "parfree");
    }

    if (!o.certify.report.empty()) {
        auto report = report_envelope(config);
        report["bounds"] = bounds;
        write_json_file(o.certify.report, report);
    }
    if (failed) {
        out << "at least one applicable bound failed\n";
        return o.strict ? exit_assertion : exit_ok;
    }
    return exit_ok;
}

}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Denoise point clouds with the declutter and parameter-free declutter algorithms"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", library_version);

    CommonOptions common;
    app.add_option("--seed", common.seed, "Seed for all randomness")->capture_default_str();
    app.add_option("--threads", common.threads, "Worker thread cap (0 = all cores)")->capture_default_str();
    app.add_option("--metric", common.metric, "Coordinate metric: l2 or l1")
        ->check(CLI::IsMember({"l2", "l1"}))
        ->capture_default_str();
    app.add_option("--kind", common.kind, "Robust distance: rms, avg or kth")
        ->check(CLI::IsMember({"rms", "avg", "kth"}))
        ->capture_default_str();
    app.add_option("--strategy", common.strategy, "Neighbor search: auto, tree or brute")
        ->check(CLI::IsMember({"auto", "tree", "brute"}))
        ->capture_default_str();

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic noisy sample with its reference set");
    gen_cmd->add_option("--shape", gen.shape, "circle, polyline, loops or torus")
        ->check(CLI::IsMember({"circle", "polyline", "loops", "torus"}))
        ->capture_default_str();
    gen_cmd->add_option("--center", gen.center, "Circle center")->delimiter(',')->capture_default_str();
    gen_cmd->add_option("--radius", gen.radius, "Circle radius")->capture_default_str();
    gen_cmd->add_option("--vertices", gen.vertices, "Polyline vertices as 'x,y;x,y;...'");
    gen_cmd->add_flag("--closed", gen.closed, "Close the polyline");
    gen_cmd->add_option("--big-radius", gen.big_radius, "Radius of the circle of loops")->capture_default_str();
    gen_cmd->add_option("--loop-radius", gen.loop_radius, "Radius of each small loop")->capture_default_str();
    gen_cmd->add_option("--loops", gen.loops, "Number of small loops")->capture_default_str();
    gen_cmd->add_option("--major", gen.major, "Torus major radius")->capture_default_str();
    gen_cmd->add_option("--minor", gen.minor, "Torus minor radius")->capture_default_str();
    gen_cmd->add_option("--count,-n", gen.count, "On-shape sample count")->capture_default_str();
    gen_cmd->add_option("--mode", gen.mode, "grid, random or adaptive")
        ->check(CLI::IsMember({"grid", "random", "adaptive"}))
        ->capture_default_str();
    gen_cmd->add_option("--feature-anchor", gen.feature_anchor, "Feature size anchor point")->delimiter(',');
    gen_cmd->add_option("--feature-floor", gen.feature_floor, "Feature size at the anchor")->capture_default_str();
    gen_cmd->add_option("--sigma", gen.sigma, "Gaussian noise scale (relative to f in adaptive mode)")
        ->capture_default_str();
    gen_cmd->add_option("--ambient", gen.ambient, "Number of ambient noise points")->capture_default_str();
    gen_cmd->add_option("--margin", gen.margin, "Ambient box margin around the reference")->capture_default_str();
    gen_cmd->add_option("--reference-factor", gen.reference_factor, "Reference points per sample point")
        ->capture_default_str();
    gen_cmd->add_option("--out-dir", gen.out_dir, "Output directory")->required();

    InputOptions decl_io;
    std::size_t decl_k = 0;
    double vicinity = 2.0;
    std::string profile_csv;
    auto* decl_cmd = app.add_subcommand("declutter", "Run the single-parameter declutter algorithm");
    add_input_options(decl_cmd, decl_io);
    decl_cmd->add_option("--k,-k", decl_k, "Number of neighbors")->required()->check(CLI::PositiveNumber);
    decl_cmd->add_option("--vicinity", vicinity, "Vicinity factor")->capture_default_str()->check(CLI::PositiveNumber);
    decl_cmd->add_option("--profile-csv", profile_csv, "Write the robust distance profile here");

    InputOptions par_io;
    double resampling_constant = theoretical_resampling_constant;
    bool practical = false;
    std::string dump_dir;
    auto* par_cmd = app.add_subcommand("parfree", "Run the parameter-free iterative declutter algorithm");
    add_input_options(par_cmd, par_io);
    auto* c_opt = par_cmd->add_option("--C", resampling_constant, "Resampling constant")
                      ->capture_default_str()
                      ->check(CLI::PositiveNumber);
    auto* practical_opt = par_cmd->add_flag("--practical", practical, "Use the practical resampling constant 4");
    c_opt->excludes(practical_opt);
    par_cmd->add_option("--dump-dir", dump_dir, "Write every iteration's point sets here");

    CertifyOptions cert;
    auto* cert_cmd = app.add_subcommand("certify", "Estimate sampling-condition parameters against a reference");
    cert_cmd->add_option("--input,-i", cert.input, "Point file")->required();
    cert_cmd->add_option("--reference,-r", cert.reference, "Reference point file")->required();
    cert_cmd->add_option("--feature", cert.feature, "Feature size values for the reference (last column)");
    cert_cmd->add_option("--k,-k", cert.ks, "Neighbor counts, comma separated")
        ->required()
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    cert_cmd->add_option("--report", cert.report, "Write a JSON report here");

    EvalOptions eval;
    auto* eval_cmd = app.add_subcommand("eval", "Check the Hausdorff guarantees on an input with a reference");
    eval_cmd->add_option("--input,-i", eval.certify.input, "Point file")->required();
    eval_cmd->add_option("--reference,-r", eval.certify.reference, "Reference point file")->required();
    eval_cmd->add_option("--feature", eval.certify.feature, "Feature size values for the reference");
    eval_cmd->add_option("--k,-k", eval.certify.ks, "Neighbor counts, comma separated")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    eval_cmd->add_flag("--parfree", eval.parfree, "Also run and check the parameter-free algorithm");
    eval_cmd->add_flag("--strict", eval.strict, "Exit with status 2 when an applicable bound fails");
    eval_cmd->add_option("--report", eval.certify.report, "Write a JSON report here");

    std::string figure;
    std::string repro_dir;
    auto* repro_cmd = app.add_subcommand("repro", "Reproduce a figure at desk scale");
    repro_cmd->add_option("figure", figure, "Figure id")->required()->check(CLI::IsMember(repro_figures()));
    repro_cmd->add_option("--out-dir", repro_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return exit_ok;
        }
        err << "error: " << e.what() << '\n';
        err << "run with --help for usage\n";
        return exit_usage;
    }

    try {
        set_thread_limit(common.threads);
        const CLI::App* sub = app.get_subcommands().front();
        const json config = collect_config(app, sub);
        if (sub == gen_cmd) {
            return run_gen(gen, common, config, out);
        }
        if (sub == decl_cmd) {
            return run_declutter(decl_io, decl_k, vicinity, profile_csv, common, config, out);
        }
        if (sub == par_cmd) {
            return run_parfree(par_io, practical ? practical_resampling_constant : resampling_constant, dump_dir,
                               common, config, out);
        }
        if (sub == cert_cmd) {
            return run_certify(cert, common, config, out);
        }
        if (sub == eval_cmd) {
            if (eval.certify.ks.empty() && !eval.parfree) {
                throw Error("eval needs --k values, --parfree, or both");
            }
            return run_eval(eval, common, config, out);
        }
        if (sub == repro_cmd) {
            return run_repro(figure, repro_dir, common, config, out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

}
