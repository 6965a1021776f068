#ifndef DECLUTTER_SYNTHGEN_HPP
#define DECLUTTER_SYNTHGEN_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "declutter/geometry.hpp"

/**
 * @file synthgen.hpp
 *
 * @brief Synthetic inputs: shapes, on-shape sampling, Gaussian perturbation, ambient noise.
 *
 * Shape parameters for the reproduction recipes are approximations; the
 * generators expose everything.
 */

namespace declutter::synth {

struct Circle {
    std::vector<double> center{0.0, 0.0};
    double radius = 1.0;
};

struct Polyline {
    std::vector<std::vector<double>> vertices;
    bool closed = false;
};

/// `loop_count` small circles of radius `loop_radius` centred on a circle of radius `big_radius`.
struct TwoScaleLoops {
    double big_radius = 1.0;
    double loop_radius = 0.1;
    std::size_t loop_count = 16;
};

/// Torus of revolution around the z axis; a desk-scale embedded 2-manifold.
struct Torus {
    double major_radius = 2.0;
    double minor_radius = 0.7;
};

using ShapeSpec = std::variant<Circle, Polyline, TwoScaleLoops, Torus>;

std::string shape_name(const ShapeSpec& shape);
std::size_t shape_dimension(const ShapeSpec& shape);
void validate(const ShapeSpec& shape);

enum class SamplingMode {
    /// Deterministic equispaced placement (arc length, or an area-uniform lattice on surfaces).
    grid,
    /// Uniform random placement.
    random,
    /// Local spacing proportional to the feature size.
    adaptive,
};

std::string to_string(SamplingMode mode);
SamplingMode sampling_mode_from_string(const std::string& name);

/**
 * f(x) = |x - anchor| + floor: positive and 1-Lipschitz by construction.
 */
struct FeatureSizeSpec {
    std::vector<double> anchor;
    double floor = 0.1;

    double operator()(std::span<const double> x) const;
};

struct ShapeSample {
    GroundTruthRef reference;
    PointCloud points;
    /// f at each sampled point, present when a feature size was requested.
    std::optional<std::vector<double>> point_feature_size;
};

/**
 * Samples exactly `n` points on the shape plus a reference of at least
 * `reference_factor * n` points (grid mode, deterministic). A feature size is
 * required in adaptive mode and optional otherwise.
 */
ShapeSample sample_shape(const ShapeSpec& shape, std::size_t n, SamplingMode mode,
                         const std::optional<FeatureSizeSpec>& feature, std::uint64_t seed,
                         std::size_t reference_factor = 10);

/**
 * Adds i.i.d. N(0, sigma^2) offsets per coordinate, scaled per point by
 * `scale[i]` when given (adaptive noise).
 */
PointCloud perturb_gaussian(const PointCloud& points, double sigma, std::uint64_t seed,
                            std::span<const double> scale = {});

struct Box {
    std::vector<double> lo;
    std::vector<double> hi;
};

Box bounding_box(const PointCloud& points, double margin);

/**
 * Appends `m` uniform points drawn from `box`. Ambient ids are
 * `points.size() .. points.size() + m - 1`.
 */
PointCloud add_ambient_noise(const PointCloud& points, const Box& box, std::size_t m, std::uint64_t seed);

enum class PointTag { signal, ambient };

std::string to_string(PointTag tag);

/**
 * @brief A generated noisy cloud that remembers which points came from where.
 */
struct SyntheticSample {
    PointCloud points;
    std::vector<PointTag> tags;
    GroundTruthRef reference;

    std::vector<PointId> ids_with(PointTag tag) const;
};

struct GeneratorConfig {
    ShapeSpec shape = Circle{};
    std::size_t count = 1000;
    SamplingMode mode = SamplingMode::random;
    std::optional<FeatureSizeSpec> feature;
    /// Absolute, or relative to f at each point when `feature` is set and the mode is adaptive.
    double sigma = 0.0;
    std::size_t ambient_count = 0;
    /// Defaults to the reference bounding box grown by `ambient_margin`.
    std::optional<Box> ambient_box;
    double ambient_margin = 0.1;
    std::uint64_t seed = 0;
    std::size_t reference_factor = 10;
};

SyntheticSample generate(const GeneratorConfig& config);

}

#endif
