#include "declutter/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace declutter::synth {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

/// Counter-based generator: every (seed, stream, index) triple gets its own reproducible sequence.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    SplitMix64(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
        : state_(seed ^ (stream * 0xD1B54A32D192ED03ULL) ^ (index * 0x9E3779B97F4A7C15ULL)) {
        (*this)();
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

enum Stream : std::uint64_t { on_shape = 1, gaussian = 2, ambient = 3 };

double uniform01(SplitMix64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

struct Piece {
    bool arc = false;
    // Segment.
    std::vector<double> a, b;
    // Arc.
    std::vector<double> center;
    double radius = 0, start_angle = 0;
    double length = 0;

    std::vector<double> at(double s) const {
        if (arc) {
            const double angle = start_angle + s / radius;
            return {center[0] + radius * std::cos(angle), center[1] + radius * std::sin(angle)};
        }
        const double t = length > 0 ? s / length : 0.0;
        std::vector<double> p(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            p[i] = a[i] + t * (b[i] - a[i]);
        }
        return p;
    }
};

struct Curve {
    std::vector<Piece> pieces;
    bool closed = true;

    double length() const {
        double total = 0;
        for (const auto& p : pieces) {
            total += p.length;
        }
        return total;
    }

    std::vector<double> at(double s) const {
        for (const auto& p : pieces) {
            if (s < p.length) {
                return p.at(s);
            }
            s -= p.length;
        }
        const auto& last = pieces.back();
        return last.at(last.length);
    }
};

Piece circle_piece(const std::vector<double>& center, double radius, double start) {
    Piece p;
    p.arc = true;
    p.center = center;
    p.radius = radius;
    p.start_angle = start;
    p.length = two_pi * radius;
    return p;
}

Curve make_curve(const ShapeSpec& shape) {
    Curve curve;
    if (const auto* c = std::get_if<Circle>(&shape)) {
        curve.pieces.push_back(circle_piece(c->center, c->radius, 0.0));
    } else if (const auto* l = std::get_if<TwoScaleLoops>(&shape)) {
        for (std::size_t j = 0; j < l->loop_count; ++j) {
            const double theta = two_pi * static_cast<double>(j) / static_cast<double>(l->loop_count);
            const std::vector<double> center{l->big_radius * std::cos(theta), l->big_radius * std::sin(theta)};
            curve.pieces.push_back(circle_piece(center, l->loop_radius, theta));
        }
    } else if (const auto* poly = std::get_if<Polyline>(&shape)) {
        curve.closed = poly->closed;
        const std::size_t v = poly->vertices.size();
        const std::size_t segments = poly->closed ? v : v - 1;
        for (std::size_t i = 0; i < segments; ++i) {
            Piece p;
            p.a = poly->vertices[i];
            p.b = poly->vertices[(i + 1) % v];
            p.length = distance(MetricKind::euclidean, p.a, p.b);
            curve.pieces.push_back(std::move(p));
        }
    }
    return curve;
}

/// Arc-length positions for `n` grid samples.
std::vector<double> grid_positions(double total, std::size_t n, bool closed) {
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (closed) {
            s[i] = total * static_cast<double>(i) / static_cast<double>(n);
        } else {
            s[i] = n == 1 ? 0.0 : total * static_cast<double>(i) / static_cast<double>(n - 1);
        }
    }
    return s;
}

/// Arc-length positions equispaced in the measure ds / f.
std::vector<double> adaptive_positions(const Curve& curve, std::size_t n, const FeatureSizeSpec& f) {
    const double total = curve.length();
    const std::size_t steps = std::max<std::size_t>(20000, 20 * n);
    std::vector<double> cumulative(steps + 1, 0.0);
    double previous = 1.0 / f(curve.at(0.0));
    for (std::size_t i = 1; i <= steps; ++i) {
        const double s = total * static_cast<double>(i) / static_cast<double>(steps);
        const double current = 1.0 / f(curve.at(std::min(s, std::nextafter(total, 0.0))));
        cumulative[i] = cumulative[i - 1] + 0.5 * (previous + current) * (total / static_cast<double>(steps));
        previous = current;
    }
    const auto targets = grid_positions(cumulative.back(), n, curve.closed);
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto it = std::lower_bound(cumulative.begin(), cumulative.end(), targets[i]);
        if (it == cumulative.begin()) {
            s[i] = 0.0;
            continue;
        }
        if (it == cumulative.end()) {
            s[i] = total;
            continue;
        }
        const std::size_t hi = static_cast<std::size_t>(it - cumulative.begin());
        const double c0 = cumulative[hi - 1], c1 = cumulative[hi];
        const double frac = c1 > c0 ? (targets[i] - c0) / (c1 - c0) : 0.0;
        s[i] = total * (static_cast<double>(hi - 1) + frac) / static_cast<double>(steps);
    }
    return s;
}

std::vector<double> torus_point(const Torus& t, double u, double v) {
    const double ring = t.major_radius + t.minor_radius * std::cos(v);
    return {ring * std::cos(u), ring * std::sin(u), t.minor_radius * std::sin(v)};
}

/// Inverse of the normalized area CDF in the tube angle: (v + (r/R) sin v) / 2pi = w.
double torus_tube_angle(const Torus& t, double w) {
    const double ratio = t.minor_radius / t.major_radius;
    const double target = w * two_pi;
    double lo = 0, hi = two_pi;
    for (int iter = 0; iter < 80; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid + ratio * std::sin(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

PointCloud torus_lattice(const Torus& t, std::size_t n) {
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    std::vector<double> flat;
    flat.reserve(3 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = two_pi * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        double w = (static_cast<double>(i) + 0.5) * golden;
        w -= std::floor(w);
        const auto p = torus_point(t, u, torus_tube_angle(t, w));
        flat.insert(flat.end(), p.begin(), p.end());
    }
    return PointCloud::from_coordinates(std::move(flat), 3);
}

PointCloud from_points(const std::vector<std::vector<double>>& points) {
    return PointCloud::from_rows(points);
}

std::vector<double> feature_values(const PointCloud& points, const FeatureSizeSpec& f) {
    std::vector<double> values(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        values[i] = f(points.point(i));
    }
    return values;
}

}

std::string shape_name(const ShapeSpec& shape) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Circle>) {
                return "circle";
            } else if constexpr (std::is_same_v<T, Polyline>) {
                return "polyline";
            } else if constexpr (std::is_same_v<T, TwoScaleLoops>) {
                return "loops";
            } else {
                return "torus";
            }
        },
        shape);
}

std::size_t shape_dimension(const ShapeSpec& shape) {
    if (const auto* poly = std::get_if<Polyline>(&shape)) {
        return poly->vertices.empty() ? 0 : poly->vertices.front().size();
    }
    return std::holds_alternative<Torus>(shape) ? 3 : 2;
}

void validate(const ShapeSpec& shape) {
    if (const auto* c = std::get_if<Circle>(&shape)) {
        if (!(c->radius > 0)) {
            throw Error("circle radius must be positive");
        }
        if (c->center.size() != 2) {
            throw Error("circle center must be 2-dimensional");
        }
    } else if (const auto* l = std::get_if<TwoScaleLoops>(&shape)) {
        if (!(l->loop_radius > 0) || !(l->big_radius > 0)) {
            throw Error("loop radii must be positive");
        }
        if (!(l->loop_radius < l->big_radius)) {
            throw Error("loop radius must be smaller than the big radius");
        }
        if (l->loop_count == 0) {
            throw Error("loop count must be positive");
        }
    } else if (const auto* poly = std::get_if<Polyline>(&shape)) {
        if (poly->vertices.size() < 2) {
            throw Error("polyline needs at least 2 vertices");
        }
        const std::size_t dim = poly->vertices.front().size();
        if (dim == 0) {
            throw Error("polyline vertices must have at least one coordinate");
        }
        for (const auto& v : poly->vertices) {
            if (v.size() != dim) {
                throw Error("polyline vertices have inconsistent dimensions");
            }
        }
        if (make_curve(shape).length() <= 0) {
            throw Error("polyline has zero length");
        }
    } else if (const auto* t = std::get_if<Torus>(&shape)) {
        if (!(t->minor_radius > 0) || !(t->major_radius > t->minor_radius)) {
            throw Error("torus needs 0 < minor radius < major radius");
        }
    }
}

std::string to_string(SamplingMode mode) {
    switch (mode) {
    case SamplingMode::grid:
        return "grid";
    case SamplingMode::random:
        return "random";
    case SamplingMode::adaptive:
        return "adaptive";
    }
    return "unknown";
}

SamplingMode sampling_mode_from_string(const std::string& name) {
    if (name == "grid" || name == "uniform") {
        return SamplingMode::grid;
    }
    if (name == "random") {
        return SamplingMode::random;
    }
    if (name == "adaptive") {
        return SamplingMode::adaptive;
    }
    throw Error("unknown sampling mode '" + name + "'");
}

std::string to_string(PointTag tag) {
    return tag == PointTag::signal ? "signal" : "ambient";
}

double FeatureSizeSpec::operator()(std::span<const double> x) const {
    return distance(MetricKind::euclidean, x, anchor) + floor;
}

ShapeSample sample_shape(const ShapeSpec& shape, std::size_t n, SamplingMode mode,
                         const std::optional<FeatureSizeSpec>& feature, std::uint64_t seed,
                         std::size_t reference_factor) {
    validate(shape);
    if (n == 0) {
        throw Error("sample count must be positive");
    }
    if (mode == SamplingMode::adaptive && !feature) {
        throw Error("adaptive sampling needs a feature size");
    }
    if (feature) {
        if (feature->anchor.size() != shape_dimension(shape)) {
            throw Error("feature anchor dimension does not match the shape");
        }
        if (!(feature->floor > 0)) {
            throw Error("feature size floor must be positive");
        }
    }
    const std::size_t reference_count = std::max<std::size_t>(reference_factor * n, 1000);

    ShapeSample out;
    if (const auto* torus = std::get_if<Torus>(&shape)) {
        out.reference.points = torus_lattice(*torus, reference_count);
        if (mode == SamplingMode::grid) {
            out.points = torus_lattice(*torus, n);
        } else {
            double f_min = 0;
            if (mode == SamplingMode::adaptive) {
                const auto values = feature_values(out.reference.points, *feature);
                f_min = *std::min_element(values.begin(), values.end());
            }
            std::vector<std::vector<double>> points;
            points.reserve(n);
            for (std::uint64_t draw = 0; points.size() < n; ++draw) {
                SplitMix64 gen(seed, Stream::on_shape, draw);
                const double u = two_pi * uniform01(gen);
                const double v = torus_tube_angle(*torus, uniform01(gen));
                auto p = torus_point(*torus, u, v);
                if (mode == SamplingMode::adaptive) {
                    // Surface density proportional to 1 / f^2.
                    const double ratio = f_min / (*feature)(p);
                    if (uniform01(gen) > ratio * ratio) {
                        continue;
                    }
                }
                points.push_back(std::move(p));
            }
            out.points = from_points(points);
        }
    } else {
        const Curve curve = make_curve(shape);
        const double total = curve.length();
        std::vector<std::vector<double>> ref;
        ref.reserve(reference_count);
        for (double s : grid_positions(total, reference_count, curve.closed)) {
            ref.push_back(curve.at(s));
        }
        out.reference.points = from_points(ref);

        std::vector<double> positions;
        switch (mode) {
        case SamplingMode::grid:
            positions = grid_positions(total, n, curve.closed);
            break;
        case SamplingMode::random:
            positions.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                SplitMix64 gen(seed, Stream::on_shape, i);
                positions[i] = total * uniform01(gen);
            }
            break;
        case SamplingMode::adaptive:
            positions = adaptive_positions(curve, n, *feature);
            break;
        }
        std::vector<std::vector<double>> points;
        points.reserve(n);
        for (double s : positions) {
            points.push_back(curve.at(s));
        }
        out.points = from_points(points);
    }

    if (feature) {
        out.reference.feature_size = feature_values(out.reference.points, *feature);
        out.point_feature_size = feature_values(out.points, *feature);
    }
    return out;
}

PointCloud perturb_gaussian(const PointCloud& points, double sigma, std::uint64_t seed,
                            std::span<const double> scale) {
    if (!(sigma >= 0)) {
        throw Error("sigma must be non-negative");
    }
    if (!scale.empty() && scale.size() != points.size()) {
        throw Error("noise scale count does not match the point count");
    }
    if (sigma == 0) {
        return points;
    }
    const std::size_t dim = points.dimension();
    std::vector<double> flat = points.data();
    for (std::size_t i = 0; i < points.size(); ++i) {
        SplitMix64 gen(seed, Stream::gaussian, i);
        std::normal_distribution<double> normal(0.0, sigma * (scale.empty() ? 1.0 : scale[i]));
        for (std::size_t d = 0; d < dim; ++d) {
            flat[i * dim + d] += normal(gen);
        }
    }
    return PointCloud::from_coordinates(std::move(flat), dim);
}

Box bounding_box(const PointCloud& points, double margin) {
    const std::size_t dim = points.dimension();
    Box box{std::vector<double>(dim, INFINITY), std::vector<double>(dim, -INFINITY)};
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto p = points.point(i);
        for (std::size_t d = 0; d < dim; ++d) {
            box.lo[d] = std::min(box.lo[d], p[d]);
            box.hi[d] = std::max(box.hi[d], p[d]);
        }
    }
    for (std::size_t d = 0; d < dim; ++d) {
        box.lo[d] -= margin;
        box.hi[d] += margin;
    }
    return box;
}

PointCloud add_ambient_noise(const PointCloud& points, const Box& box, std::size_t m, std::uint64_t seed) {
    if (box.lo.size() != box.hi.size() || box.lo.empty()) {
        throw Error("ambient box bounds are malformed");
    }
    for (std::size_t d = 0; d < box.lo.size(); ++d) {
        if (!(box.hi[d] > box.lo[d])) {
            throw Error("ambient box has zero volume");
        }
    }
    if (!points.empty() && points.dimension() != box.lo.size()) {
        throw Error("ambient box dimension does not match the points");
    }
    if (m == 0) {
        return points;
    }
    const std::size_t dim = box.lo.size();
    std::vector<double> flat;
    flat.reserve(m * dim);
    for (std::size_t i = 0; i < m; ++i) {
        SplitMix64 gen(seed, Stream::ambient, i);
        for (std::size_t d = 0; d < dim; ++d) {
            flat.push_back(box.lo[d] + (box.hi[d] - box.lo[d]) * uniform01(gen));
        }
    }
    return points.append(PointCloud::from_coordinates(std::move(flat), dim));
}

std::vector<PointId> SyntheticSample::ids_with(PointTag tag) const {
    std::vector<PointId> ids;
    for (std::size_t i = 0; i < tags.size(); ++i) {
        if (tags[i] == tag) {
            ids.push_back(i);
        }
    }
    return ids;
}

SyntheticSample generate(const GeneratorConfig& config) {
    auto shape = sample_shape(config.shape, config.count, config.mode, config.feature, config.seed,
                              config.reference_factor);
    std::span<const double> scale;
    if (config.mode == SamplingMode::adaptive && shape.point_feature_size) {
        scale = *shape.point_feature_size;
    }
    SyntheticSample out;
    out.points = perturb_gaussian(shape.points, config.sigma, config.seed, scale);
    out.tags.assign(out.points.size(), PointTag::signal);
    if (config.ambient_count > 0) {
        const Box box = config.ambient_box ? *config.ambient_box
                                           : bounding_box(shape.reference.points, config.ambient_margin);
        out.points = add_ambient_noise(out.points, box, config.ambient_count, config.seed);
        out.tags.resize(out.points.size(), PointTag::ambient);
    }
    out.reference = std::move(shape.reference);
    return out;
}

}
