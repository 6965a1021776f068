#ifndef DECLUTTER_TOOLS_CLI_SUPPORT_HPP
#define DECLUTTER_TOOLS_CLI_SUPPORT_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "declutter/declutter.hpp"
#include "declutter/parfree.hpp"
#include "declutter/synthgen.hpp"

namespace declutter::cli {

/// Options shared by every subcommand.
struct CommonOptions {
    std::uint64_t seed = 0;
    std::size_t threads = 0;
    std::string metric = "l2";
    std::string kind = "rms";
    std::string strategy = "auto";
};

/// A loaded input cloud with the metric it is measured in.
struct LoadedInput {
    PointCloud cloud;
    Metric metric;
    SearchStrategy strategy = SearchStrategy::brute_force;
};

LoadedInput load_input(const std::string& points_path, const std::string& matrix_path, const CommonOptions& common);

GroundTruthRef load_reference(const std::string& reference_path, const std::string& feature_path);

/// Writes the selected points as coordinates, or as bare ids for distance-matrix clouds.
void write_selection(const std::string& path, const PointCloud& cloud, std::span<const PointId> ids);

void write_ids(const std::string& path, std::span<const PointId> ids);

void ensure_directory(const std::filesystem::path& dir);

/// Report envelope: schema, library version and the resolved configuration.
nlohmann::json report_envelope(const nlohmann::json& config);

/// Scatter of a 2D cloud with an optional highlighted subset; a no-op message for other dimensions.
void write_svg(const std::string& path, const PointCloud& cloud, std::span<const PointId> highlight,
               std::ostream& log);

/// Figure recipes; returns the exit code.
int run_repro(const std::string& figure, const std::filesystem::path& out_dir, const CommonOptions& common,
              const nlohmann::json& config, std::ostream& out);

std::vector<std::string> repro_figures();

/// The noisy input of a figure recipe; shape parameters approximate the published figures.
synth::SyntheticSample figure_input(const std::string& figure, std::uint64_t seed);

}

#endif
