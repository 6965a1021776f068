#ifndef DECLUTTER_GEOMETRY_HPP
#define DECLUTTER_GEOMETRY_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

/**
 * @file geometry.hpp
 *
 * @brief Point clouds, metrics and ground-truth references.
 */

namespace declutter {

using PointId = std::size_t;

/**
 * @brief Raised for malformed inputs and violated preconditions.
 */
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * @brief Finite indexed point set.
 *
 * A cloud is either coordinate-backed (n points of dimension d, row-major)
 * or matrix-backed (an n-by-n table of pairwise distances). Ids are the
 * contiguous range 0..n-1. Immutable after construction.
 */
class PointCloud {
public:
    PointCloud() = default;

    static PointCloud from_coordinates(std::vector<double> flat, std::size_t dimension);
    static PointCloud from_rows(const std::vector<std::vector<double>>& rows);

    /**
     * The matrix must be square, symmetric, zero on the diagonal, non-negative and finite.
     */
    static PointCloud from_distance_matrix(std::vector<double> flat, std::size_t n);

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    /**
     * @return Coordinate dimension, or 0 for matrix-backed clouds.
     */
    std::size_t dimension() const { return dimension_; }

    bool is_matrix() const { return matrix_; }

    std::span<const double> point(PointId id) const;
    double matrix_entry(PointId a, PointId b) const;

    const std::vector<double>& data() const { return data_; }

    /**
     * Copies the selected points into a new coordinate cloud; new ids follow `ids` order.
     */
    PointCloud subset(std::span<const PointId> ids) const;

    /**
     * Concatenates two coordinate clouds of equal dimension.
     */
    PointCloud append(const PointCloud& other) const;

    bool operator==(const PointCloud&) const = default;

private:
    std::vector<double> data_;
    std::size_t size_ = 0;
    std::size_t dimension_ = 0;
    bool matrix_ = false;
};

enum class MetricKind { euclidean, manhattan, precomputed };

/**
 * @brief Distance on the ambient space.
 *
 * `triangle_constant` is metadata: the factor by which the triangle inequality
 * is allowed to be violated (1 for a true metric).
 */
struct Metric {
    MetricKind kind = MetricKind::euclidean;
    double triangle_constant = 1.0;
};

std::string to_string(MetricKind kind);
MetricKind metric_kind_from_string(const std::string& name);

/**
 * The metric that matches the cloud's storage: precomputed for matrix clouds,
 * `coordinate_kind` otherwise.
 */
Metric metric_for(const PointCloud& cloud, MetricKind coordinate_kind = MetricKind::euclidean);

double distance(MetricKind kind, std::span<const double> a, std::span<const double> b);
double distance(const Metric& metric, const PointCloud& cloud, PointId a, PointId b);

/**
 * Distance between a cloud member and an external coordinate point.
 */
double distance(const Metric& metric, const PointCloud& cloud, PointId a, std::span<const double> b);

/**
 * Empirical lower bound on the relaxed-triangle constant over random triples.
 *
 * Returns the largest observed d(x,y) / (d(x,w) + d(w,y)), clamped below at 1.
 * Triples whose denominator vanishes are skipped; if every sampled triple is
 * degenerate an Error is thrown.
 */
double estimate_triangle_constant(const PointCloud& cloud, const Metric& metric, std::size_t sample_count,
                                  std::uint64_t seed);

/**
 * @brief Dense discretization of the hidden compact set, with an optional feature size.
 */
struct GroundTruthRef {
    PointCloud points;
    std::optional<std::vector<double>> feature_size;

    bool adaptive() const { return feature_size.has_value(); }

    /**
     * Checks shape consistency and strict positivity of the feature size.
     */
    void validate() const;
};

}

#endif
