#include "cli_support.hpp"

#include <fstream>
#include <ostream>

#include "declutter/io.hpp"
#include "declutter/report.hpp"
#include "declutter/svg.hpp"

namespace declutter::cli {

LoadedInput load_input(const std::string& points_path, const std::string& matrix_path, const CommonOptions& common) {
    if (points_path.empty() == matrix_path.empty()) {
        throw Error("exactly one of --input and --matrix is required");
    }
    LoadedInput in;
    const MetricKind coordinate_kind = common.metric == "l1" ? MetricKind::manhattan : MetricKind::euclidean;
    in.cloud = matrix_path.empty() ? io::read_points_file(points_path) : io::read_matrix_file(matrix_path);
    in.metric = metric_for(in.cloud, coordinate_kind);
    if (common.strategy == "auto") {
        in.strategy = default_strategy(in.cloud, in.metric);
    } else {
        in.strategy = common.strategy == "tree" ? SearchStrategy::spatial_tree : SearchStrategy::brute_force;
    }
    return in;
}

GroundTruthRef load_reference(const std::string& reference_path, const std::string& feature_path) {
    GroundTruthRef ref;
    ref.points = io::read_points_file(reference_path);
    if (!feature_path.empty()) {
        ref.feature_size = io::read_values_file(feature_path);
    }
    ref.validate();
    return ref;
}

void write_selection(const std::string& path, const PointCloud& cloud, std::span<const PointId> ids) {
    if (cloud.is_matrix()) {
        write_ids(path, ids);
        return;
    }
    io::write_points_file(path, cloud, ids);
}

void write_ids(const std::string& path, std::span<const PointId> ids) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open '" + path + "' for writing");
    }
    out << "# id\n";
    for (PointId id : ids) {
        out << id << '\n';
    }
}

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw Error("cannot create directory '" + dir.string() + "'");
    }
}

nlohmann::json report_envelope(const nlohmann::json& config) {
    return {{"schema", report_schema}, {"version", library_version}, {"config", config}};
}

void write_svg(const std::string& path, const PointCloud& cloud, std::span<const PointId> highlight,
               std::ostream& log) {
    if (cloud.is_matrix() || cloud.dimension() != 2) {
        log << "svg skipped: only 2D coordinate inputs can be plotted\n";
        return;
    }
    // The full input in light grey, the selection on top in red.
    std::vector<svg::Layer> layers{{&cloud, {}, "#bbbbbb", 1.2}};
    if (!highlight.empty()) {
        layers.push_back({&cloud, std::vector<PointId>(highlight.begin(), highlight.end()), "#d62728", 1.6});
    }
    svg::write_scatter(path, layers);
}

}
