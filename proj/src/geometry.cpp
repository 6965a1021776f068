#include "declutter/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace declutter {

namespace {

void require_finite(const std::vector<double>& values) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw Error("point data contains NaN or Inf");
        }
    }
}

}

PointCloud PointCloud::from_coordinates(std::vector<double> flat, std::size_t dimension) {
    if (dimension == 0) {
        throw Error("point dimension must be at least 1");
    }
    if (flat.empty() || flat.size() % dimension != 0) {
        throw Error("coordinate buffer size " + std::to_string(flat.size()) + " is not a positive multiple of dimension " +
                    std::to_string(dimension));
    }
    require_finite(flat);
    PointCloud cloud;
    cloud.size_ = flat.size() / dimension;
    cloud.dimension_ = dimension;
    cloud.data_ = std::move(flat);
    return cloud;
}

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) {
        throw Error("point cloud must contain at least one point");
    }
    const std::size_t dim = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * dim);
    for (const auto& row : rows) {
        if (row.size() != dim) {
            throw Error("inconsistent point dimension: expected " + std::to_string(dim) + ", got " +
                        std::to_string(row.size()));
        }
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return from_coordinates(std::move(flat), dim);
}

PointCloud PointCloud::from_distance_matrix(std::vector<double> flat, std::size_t n) {
    if (n == 0 || flat.size() != n * n) {
        throw Error("distance matrix must be square and non-empty");
    }
    require_finite(flat);
    for (std::size_t i = 0; i < n; ++i) {
        if (flat[i * n + i] != 0.0) {
            throw Error("distance matrix diagonal must be zero (row " + std::to_string(i) + ")");
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double v = flat[i * n + j];
            if (v < 0.0) {
                throw Error("distance matrix has a negative entry");
            }
            if (v != flat[j * n + i]) {
                throw Error("distance matrix is not symmetric at (" + std::to_string(i) + ", " + std::to_string(j) +
                            ")");
            }
        }
    }
    PointCloud cloud;
    cloud.size_ = n;
    cloud.dimension_ = 0;
    cloud.matrix_ = true;
    cloud.data_ = std::move(flat);
    return cloud;
}

std::span<const double> PointCloud::point(PointId id) const {
    if (matrix_) {
        throw Error("matrix-backed cloud has no coordinates");
    }
    if (id >= size_) {
        throw Error("point id " + std::to_string(id) + " out of range");
    }
    return {data_.data() + id * dimension_, dimension_};
}

double PointCloud::matrix_entry(PointId a, PointId b) const {
    if (!matrix_) {
        throw Error("cloud is not matrix-backed");
    }
    if (a >= size_ || b >= size_) {
        throw Error("matrix index out of range");
    }
    return data_[a * size_ + b];
}

PointCloud PointCloud::subset(std::span<const PointId> ids) const {
    if (matrix_) {
        std::vector<double> flat;
        flat.reserve(ids.size() * ids.size());
        for (PointId a : ids) {
            for (PointId b : ids) {
                flat.push_back(matrix_entry(a, b));
            }
        }
        return from_distance_matrix(std::move(flat), ids.size());
    }
    std::vector<double> flat;
    flat.reserve(ids.size() * dimension_);
    for (PointId id : ids) {
        auto p = point(id);
        flat.insert(flat.end(), p.begin(), p.end());
    }
    return from_coordinates(std::move(flat), dimension_);
}

PointCloud PointCloud::append(const PointCloud& other) const {
    if (matrix_ || other.matrix_) {
        throw Error("cannot append matrix-backed clouds");
    }
    if (empty()) {
        return other;
    }
    if (other.empty()) {
        return *this;
    }
    if (dimension_ != other.dimension_) {
        throw Error("cannot append clouds of different dimension");
    }
    std::vector<double> flat = data_;
    flat.insert(flat.end(), other.data_.begin(), other.data_.end());
    return from_coordinates(std::move(flat), dimension_);
}

std::string to_string(MetricKind kind) {
    switch (kind) {
    case MetricKind::euclidean:
        return "l2";
    case MetricKind::manhattan:
        return "l1";
    case MetricKind::precomputed:
        return "matrix";
    }
    return "unknown";
}

MetricKind metric_kind_from_string(const std::string& name) {
    if (name == "l2" || name == "euclidean") {
        return MetricKind::euclidean;
    }
    if (name == "l1" || name == "manhattan") {
        return MetricKind::manhattan;
    }
    if (name == "matrix" || name == "precomputed") {
        return MetricKind::precomputed;
    }
    throw Error("unknown metric '" + name + "'");
}

Metric metric_for(const PointCloud& cloud, MetricKind coordinate_kind) {
    if (cloud.is_matrix()) {
        return Metric{MetricKind::precomputed, 1.0};
    }
    if (coordinate_kind == MetricKind::precomputed) {
        throw Error("precomputed metric requires a distance-matrix cloud");
    }
    return Metric{coordinate_kind, 1.0};
}

double distance(MetricKind kind, std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw Error("dimension mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
    switch (kind) {
    case MetricKind::euclidean: {
        double sum = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double delta = a[i] - b[i];
            sum += delta * delta;
        }
        return std::sqrt(sum);
    }
    case MetricKind::manhattan: {
        double sum = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            sum += std::abs(a[i] - b[i]);
        }
        return sum;
    }
    case MetricKind::precomputed:
        break;
    }
    throw Error("precomputed metric cannot evaluate coordinate points");
}

double distance(const Metric& metric, const PointCloud& cloud, PointId a, PointId b) {
    if (metric.kind == MetricKind::precomputed) {
        return cloud.matrix_entry(a, b);
    }
    return distance(metric.kind, cloud.point(a), cloud.point(b));
}

double distance(const Metric& metric, const PointCloud& cloud, PointId a, std::span<const double> b) {
    return distance(metric.kind, cloud.point(a), b);
}

double estimate_triangle_constant(const PointCloud& cloud, const Metric& metric, std::size_t sample_count,
                                  std::uint64_t seed) {
    const std::size_t n = cloud.size();
    if (n < 3) {
        throw Error("triangle constant estimation needs at least 3 points");
    }
    double worst = 1.0;
    bool any = false;
    auto visit = [&](PointId x, PointId y, PointId w) {
        const double denom = distance(metric, cloud, x, w) + distance(metric, cloud, w, y);
        if (denom == 0.0) {
            return;
        }
        any = true;
        worst = std::max(worst, distance(metric, cloud, x, y) / denom);
    };

    // Small clouds are enumerated exhaustively over distinct ordered triples.
    if (n * n * n <= sample_count) {
        for (PointId x = 0; x < n; ++x) {
            for (PointId y = 0; y < n; ++y) {
                for (PointId w = 0; w < n; ++w) {
                    if (x != y && y != w && x != w) {
                        visit(x, y, w);
                    }
                }
            }
        }
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<PointId> pick(0, n - 1);
        for (std::size_t s = 0; s < sample_count; ++s) {
            const PointId x = pick(rng);
            PointId y = pick(rng);
            PointId w = pick(rng);
            if (x == y || y == w || x == w) {
                continue;
            }
            visit(x, y, w);
        }
    }
    if (!any) {
        throw Error("all sampled triples are degenerate");
    }
    return worst;
}

void GroundTruthRef::validate() const {
    if (points.empty()) {
        throw Error("ground-truth reference is empty");
    }
    if (points.is_matrix()) {
        throw Error("ground-truth reference must be coordinate-backed");
    }
    if (feature_size) {
        if (feature_size->size() != points.size()) {
            throw Error("feature size has " + std::to_string(feature_size->size()) + " values for " +
                        std::to_string(points.size()) + " reference points");
        }
        for (std::size_t i = 0; i < feature_size->size(); ++i) {
            const double f = (*feature_size)[i];
            if (!(f > 0.0) || !std::isfinite(f)) {
                throw Error("feature size must be strictly positive (reference point " + std::to_string(i) + ")");
            }
        }
    }
}

}
