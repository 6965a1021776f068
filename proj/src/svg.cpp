#include "declutter/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "declutter/io.hpp"

namespace declutter::svg {

namespace {

std::vector<PointId> layer_ids(const Layer& layer) {
    if (!layer.ids.empty()) {
        return layer.ids;
    }
    std::vector<PointId> ids(layer.cloud->size());
    std::iota(ids.begin(), ids.end(), PointId{0});
    return ids;
}

}

void write_scatter(const std::string& path, std::span<const Layer> layers, double width) {
    double lo_x = INFINITY, lo_y = INFINITY, hi_x = -INFINITY, hi_y = -INFINITY;
    for (const auto& layer : layers) {
        if (!layer.cloud || layer.cloud->is_matrix() || layer.cloud->dimension() != 2) {
            throw Error("SVG output is only available for 2D point clouds");
        }
        for (PointId id : layer_ids(layer)) {
            auto p = layer.cloud->point(id);
            lo_x = std::min(lo_x, p[0]);
            hi_x = std::max(hi_x, p[0]);
            lo_y = std::min(lo_y, p[1]);
            hi_y = std::max(hi_y, p[1]);
        }
    }
    if (!std::isfinite(lo_x)) {
        lo_x = lo_y = 0;
        hi_x = hi_y = 1;
    }
    const double span_x = std::max(hi_x - lo_x, 1e-12);
    const double span_y = std::max(hi_y - lo_y, 1e-12);
    const double margin = 10.0;
    const double scale = (width - 2 * margin) / std::max(span_x, span_y);
    const double height = span_y * scale + 2 * margin;

    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open '" + path + "' for writing");
    }
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& layer : layers) {
        out << "<g fill=\"" << layer.color << "\">\n";
        for (PointId id : layer_ids(layer)) {
            auto p = layer.cloud->point(id);
            const double x = margin + (p[0] - lo_x) * scale;
            const double y = height - margin - (p[1] - lo_y) * scale;
            out << "<circle cx=\"" << io::format_double(x) << "\" cy=\"" << io::format_double(y) << "\" r=\""
                << layer.radius << "\"/>\n";
        }
        out << "</g>\n";
    }
    out << "</svg>\n";
}

}
