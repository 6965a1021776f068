#ifndef DECLUTTER_SVG_HPP
#define DECLUTTER_SVG_HPP

#include <span>
#include <string>
#include <vector>

#include "declutter/geometry.hpp"

namespace declutter::svg {

struct Layer {
    const PointCloud* cloud = nullptr;
    std::vector<PointId> ids;  // empty = all points
    std::string color = "#000000";
    double radius = 1.5;
};

/**
 * Writes a scatter plot of 2D layers, drawn in order, sharing one viewport.
 * Throws for clouds that are not 2-dimensional.
 */
void write_scatter(const std::string& path, std::span<const Layer> layers, double width = 600.0);

}

#endif
