#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "cli.hpp"
#include "cli_support.hpp"
#include "declutter/evaluation.hpp"
#include "declutter/io.hpp"
#include "declutter/report.hpp"
#include "declutter/svg.hpp"

namespace declutter::cli {

namespace {

using nlohmann::json;

synth::Polyline square(double side) {
    const double h = side / 2;
    return {{{-h, -h}, {h, -h}, {h, h}, {-h, h}}, true};
}

synth::Polyline pentagram(double radius) {
    synth::Polyline star{{}, true};
    for (int j = 0; j < 5; ++j) {
        // Visit every second vertex of a regular pentagon.
        const double a = std::numbers::pi / 2 + 2 * std::numbers::pi * ((2 * j) % 5) / 5.0;
        star.vertices.push_back({radius * std::cos(a), radius * std::sin(a)});
    }
    return star;
}

/// Noisy samples of several shapes with shared ambient noise over the joint reference box.
synth::SyntheticSample compose(const std::vector<synth::GeneratorConfig>& parts, std::size_t ambient,
                               double margin, std::uint64_t seed) {
    synth::SyntheticSample out;
    std::uint64_t part_seed = seed;
    for (auto config : parts) {
        config.ambient_count = 0;
        config.seed = part_seed++;
        auto sample = synth::generate(config);
        if (out.points.empty()) {
            out = std::move(sample);
            continue;
        }
        out.points = out.points.append(sample.points);
        out.tags.insert(out.tags.end(), sample.tags.begin(), sample.tags.end());
        out.reference.points = out.reference.points.append(sample.reference.points);
    }
    const auto box = synth::bounding_box(out.reference.points, margin);
    out.points = synth::add_ambient_noise(out.points, box, ambient, seed ^ 0x9e3779b97f4a7c15ULL);
    out.tags.resize(out.points.size(), synth::PointTag::ambient);
    return out;
}

struct Output {
    std::string name;
    std::vector<PointId> ids;
};

json summarize(const synth::SyntheticSample& input, const Output& output) {
    const auto ambient = input.ids_with(synth::PointTag::ambient);
    const auto survivors = std::count_if(ambient.begin(), ambient.end(), [&](PointId id) {
        return std::binary_search(output.ids.begin(), output.ids.end(), id);
    });
    const auto parts = hausdorff_to_reference(input.points, Metric{}, output.ids, input.reference.points);
    return {{"name", output.name},
            {"size", output.ids.size()},
            {"ambient_survivors", survivors},
            {"to_reference", parts.forward},
            {"from_reference", parts.backward}};
}

void emit(const std::filesystem::path& dir, const synth::SyntheticSample& input, const Output& output,
          std::ostream& out) {
    io::write_points_file((dir / (output.name + ".csv")).string(), input.points, output.ids);
    if (input.points.dimension() == 2) {
        write_svg((dir / (output.name + ".svg")).string(), input.points, output.ids, out);
    }
}

std::vector<PointId> sorted(std::vector<PointId> ids) {
    std::sort(ids.begin(), ids.end());
    return ids;
}

}

std::vector<std::string> repro_figures() { return {"fig1", "fig2", "fig4", "fig5"}; }

synth::SyntheticSample figure_input(const std::string& figure, std::uint64_t seed) {
    synth::GeneratorConfig config;
    config.seed = seed;
    if (figure == "fig1") {
        // Sixteen loops of twelve points: loops at a fine scale, one circle at a coarse one.
        config.shape = synth::TwoScaleLoops{1.0, 0.15, 16};
        config.count = 192;
        config.mode = synth::SamplingMode::grid;
        config.sigma = 0.004;
        config.ambient_count = 24;
        return synth::generate(config);
    }
    if (figure == "fig2") {
        // Concentric squares whose gaps halve: features at several scales.
        std::vector<synth::GeneratorConfig> parts;
        const double sides[] = {2.0, 1.0, 0.5, 0.25};
        for (double side : sides) {
            synth::GeneratorConfig part;
            part.shape = square(side);
            part.count = static_cast<std::size_t>(std::lround(7000 * side / 3.75));
            part.sigma = 0.003;
            parts.push_back(part);
        }
        return compose(parts, 2000, 0.1, seed);
    }
    if (figure == "fig4") {
        config.shape = pentagram(1.0);
        config.count = 14000;
        config.sigma = 0.01;
        config.ambient_count = 1000;
        return synth::generate(config);
    }
    if (figure == "fig5") {
        config.shape = synth::Torus{2.0, 0.7};
        config.count = 4000;
        config.mode = synth::SamplingMode::adaptive;
        config.feature = synth::FeatureSizeSpec{{2.7, 0.0, 0.0}, 0.1};
        config.sigma = 0.02;
        config.ambient_count = 500;
        return synth::generate(config);
    }
    throw Error("unknown figure '" + figure + "'");
}

int run_repro(const std::string& figure, const std::filesystem::path& out_dir, const CommonOptions& common,
              const nlohmann::json& config, std::ostream& out) {
    const auto input = figure_input(figure, common.seed);
    ensure_directory(out_dir);
    io::write_points_file((out_dir / "input.csv").string(), input.points);
    io::write_points_file((out_dir / "reference.csv").string(), input.reference.points);
    if (input.points.dimension() == 2) {
        write_svg((out_dir / "input.svg").string(), input.points, {}, out);
        const svg::Layer truth[] = {{&input.reference.points, {}, "#1f77b4", 1.0}};
        svg::write_scatter((out_dir / "reference.svg").string(), truth);
    }

    const Metric metric{};
    const auto kind = distance_kind_from_string(common.kind);
    const NeighborIndex index(input.points, metric, SearchStrategy::spatial_tree);
    std::vector<Output> outputs;
    auto run_declutter = [&](std::size_t k) {
        outputs.push_back({"declutter_k" + std::to_string(k), declutter::declutter(index, k, kind).kept_sorted()});
    };
    std::optional<ParfreeResult> parfree;
    auto run_parfree = [&](bool intermediate) {
        parfree = parfree_declutter(input.points, metric, kind, theoretical_resampling_constant,
                                    SearchStrategy::spatial_tree);
        if (intermediate) {
            for (const auto& step : parfree->trace.iterations) {
                outputs.push_back({"parfree_level" + std::to_string(step.level), sorted(step.input)});
            }
        }
        outputs.push_back({"parfree", parfree->output});
    };

    if (figure == "fig1") {
        run_declutter(2);
        run_declutter(10);
        run_parfree(false);
    } else if (figure == "fig2") {
        run_parfree(true);
    } else if (figure == "fig4") {
        run_declutter(9);
        run_declutter(30);
        run_parfree(false);
    } else {
        run_parfree(true);
    }

    auto report = report_envelope(config);
    report["figure"] = figure;
    report["input_size"] = input.points.size();
    report["ambient_count"] = input.ids_with(synth::PointTag::ambient).size();
    report["outputs"] = json::array();
    for (const auto& output : outputs) {
        emit(out_dir, input, output, out);
        report["outputs"].push_back(summarize(input, output));
        out << output.name << ": " << output.ids.size() << " points\n";
    }
    if (parfree) {
        report["trace"] = to_json(parfree->trace);
    }
    write_json_file((out_dir / "summary.json").string(), report);
    out << "wrote " << figure << " outputs to " << out_dir.string() << '\n';
    return exit_ok;
}

}
