#include <doctest.h>

#include <cmath>
#include <numbers>

#include "declutter/evaluation.hpp"
#include "declutter/synthgen.hpp"
#include "support.hpp"

using namespace declutter;
using namespace declutter::synth;

namespace {

/// Distance from a 2D point to the segment ab.
double segment_distance(std::span<const double> p, const std::vector<double>& a, const std::vector<double>& b) {
    const double vx = b[0] - a[0];
    const double vy = b[1] - a[1];
    const double t = std::clamp(((p[0] - a[0]) * vx + (p[1] - a[1]) * vy) / (vx * vx + vy * vy), 0.0, 1.0);
    return std::hypot(p[0] - a[0] - t * vx, p[1] - a[1] - t * vy);
}

double shape_residual(const ShapeSpec& shape, std::span<const double> p) {
    if (const auto* c = std::get_if<Circle>(&shape)) {
        return std::abs(std::hypot(p[0] - c->center[0], p[1] - c->center[1]) - c->radius);
    }
    if (const auto* l = std::get_if<Polyline>(&shape)) {
        double best = INFINITY;
        const std::size_t m = l->vertices.size();
        for (std::size_t i = 0; i + 1 < m + (l->closed ? 1 : 0); ++i) {
            best = std::min(best, segment_distance(p, l->vertices[i], l->vertices[(i + 1) % m]));
        }
        return best;
    }
    if (const auto* t = std::get_if<TwoScaleLoops>(&shape)) {
        double best = INFINITY;
        for (std::size_t j = 0; j < t->loop_count; ++j) {
            const double a = 2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(t->loop_count);
            const double cx = t->big_radius * std::cos(a);
            const double cy = t->big_radius * std::sin(a);
            best = std::min(best, std::abs(std::hypot(p[0] - cx, p[1] - cy) - t->loop_radius));
        }
        return best;
    }
    const auto& torus = std::get<Torus>(shape);
    const double ring = std::hypot(p[0], p[1]) - torus.major_radius;
    return std::abs(std::hypot(ring, p[2]) - torus.minor_radius);
}

const ShapeSpec all_shapes[] = {
    Circle{{0.5, -1.0}, 2.0},
    Polyline{{{0, 0}, {1, 0}, {1, 1}}, false},
    Polyline{{{0, 0}, {2, 0}, {0, 2}}, true},
    TwoScaleLoops{1.0, 0.15, 8},
    Torus{2.0, 0.7},
};

}

TEST_CASE("grid circle with four points sits at the quarter angles") {
    const auto s = sample_shape(Circle{}, 4, SamplingMode::grid, std::nullopt, 0);
    REQUIRE(s.points.size() == 4);
    const double expected[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(s.points.point(i)[0] == doctest::Approx(expected[i][0]).epsilon(1e-15));
        CHECK(s.points.point(i)[1] == doctest::Approx(expected[i][1]).epsilon(1e-15));
    }
    CHECK(s.reference.points.size() >= 40);
}

TEST_CASE("open two-vertex polyline grid gives endpoints and midpoint") {
    const auto s = sample_shape(Polyline{{{0, 0}, {2, 4}}, false}, 3, SamplingMode::grid, std::nullopt, 0);
    REQUIRE(s.points.size() == 3);
    CHECK(s.points.point(0)[0] == 0.0);
    CHECK(s.points.point(1)[0] == doctest::Approx(1.0));
    CHECK(s.points.point(1)[1] == doctest::Approx(2.0));
    CHECK(s.points.point(2)[0] == doctest::Approx(2.0));
    CHECK(s.points.point(2)[1] == doctest::Approx(4.0));
}

TEST_CASE("invalid shapes are rejected") {
    CHECK_THROWS_AS(validate(Circle{{0, 0}, -1.0}), Error);
    CHECK_THROWS_AS(validate(Polyline{{{0, 0}}, false}), Error);
    CHECK_THROWS_AS(validate(TwoScaleLoops{1.0, 1.5, 4}), Error);
    CHECK_THROWS_AS(validate(Torus{1.0, 2.0}), Error);
    CHECK_THROWS_AS(sample_shape(Circle{}, 0, SamplingMode::grid, std::nullopt, 0), Error);
}

TEST_CASE("samples lie on their shapes and the reference is dense") {
    for (const auto& shape : all_shapes) {
        for (auto mode : {SamplingMode::grid, SamplingMode::random, SamplingMode::adaptive}) {
            std::optional<FeatureSizeSpec> feature;
            if (mode == SamplingMode::adaptive) {
                feature = FeatureSizeSpec{std::vector<double>(shape_dimension(shape), 0.0), 0.2};
            }
            const auto s = sample_shape(shape, 300, mode, feature, 42);
            CAPTURE(shape_name(shape));
            CAPTURE(to_string(mode));
            REQUIRE(s.points.size() == 300);
            CHECK(s.reference.points.size() >= 3000);
            for (std::size_t i = 0; i < s.points.size(); ++i) {
                CHECK(shape_residual(shape, s.points.point(i)) <= 1e-9);
            }
            for (std::size_t i = 0; i < s.reference.points.size(); ++i) {
                CHECK(shape_residual(shape, s.reference.points.point(i)) <= 1e-9);
            }
            if (feature) {
                REQUIRE(s.reference.feature_size);
                REQUIRE(s.point_feature_size);
                CHECK(check_feature_size(s.reference, Metric{}, 1e-12).pass());
            }
        }
    }
}

TEST_CASE("reference pitch bounds the distance from on-shape points") {
    // On a curve with a reference of m grid points, every curve point lies within half the arc spacing.
    const Circle circle{{0, 0}, 1.0};
    const auto s = sample_shape(circle, 500, SamplingMode::random, std::nullopt, 9);
    const double pitch = 2 * std::numbers::pi / static_cast<double>(s.reference.points.size());
    const auto parts = hausdorff_parts(s.points, s.reference.points);
    CHECK(parts.forward <= pitch / 2 + 1e-12);
}

TEST_CASE("adaptive spacing follows the feature size") {
    const Polyline segment{{{0, 0}, {1, 0}}, false};
    const FeatureSizeSpec feature{{0, 0}, 0.05};
    const auto s = sample_shape(segment, 200, SamplingMode::adaptive, feature, 0);
    // Equal steps in the integral of 1/f: gap / f is nearly constant along the segment.
    std::vector<double> xs;
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        xs.push_back(s.points.point(i)[0]);
    }
    std::sort(xs.begin(), xs.end());
    const double first_gap = xs[1] - xs[0];
    const double last_gap = xs.back() - xs[xs.size() - 2];
    CHECK(last_gap > 5 * first_gap);
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double mid = 0.5 * (xs[i] + xs[i - 1]);
        const double ratio = (xs[i] - xs[i - 1]) / (mid + 0.05);
        CHECK(ratio == doctest::Approx(std::log(1.05 / 0.05) / 199.0).epsilon(0.01));
    }
}

TEST_CASE("perturbation and ambient noise") {
    const auto s = sample_shape(Circle{}, 100, SamplingMode::random, std::nullopt, 1);
    CHECK(perturb_gaussian(s.points, 0.0, 7) == s.points);
    const auto a = perturb_gaussian(s.points, 0.05, 7);
    CHECK(a == perturb_gaussian(s.points, 0.05, 7));
    CHECK(!(a == perturb_gaussian(s.points, 0.05, 8)));
    CHECK_THROWS_AS(perturb_gaussian(s.points, -1.0, 7), Error);

    const Box box{{-2, -2}, {2, 2}};
    CHECK(add_ambient_noise(s.points, box, 0, 3) == s.points);
    const auto noisy = add_ambient_noise(s.points, box, 50, 3);
    REQUIRE(noisy.size() == 150);
    for (std::size_t i = 0; i < 100; ++i) {
        CHECK(noisy.point(i)[0] == s.points.point(i)[0]);
    }
    for (std::size_t i = 100; i < 150; ++i) {
        for (std::size_t d = 0; d < 2; ++d) {
            CHECK(noisy.point(i)[d] >= -2);
            CHECK(noisy.point(i)[d] <= 2);
        }
    }
    CHECK_THROWS_AS(add_ambient_noise(s.points, Box{{0, 0}, {0, 1}}, 5, 3), Error);
}

TEST_CASE("generate tags signal and ambient points and is reproducible") {
    GeneratorConfig config;
    config.shape = TwoScaleLoops{1.0, 0.15, 16};
    config.count = 400;
    config.sigma = 0.01;
    config.ambient_count = 60;
    config.seed = 5;
    const auto a = generate(config);
    const auto b = generate(config);
    CHECK(a.points == b.points);
    CHECK(a.points.size() == 460);
    CHECK(a.ids_with(PointTag::signal).size() == 400);
    CHECK(a.ids_with(PointTag::ambient).front() == 400);
    config.seed = 6;
    CHECK(!(generate(config).points == a.points));
}

TEST_CASE("sampling mode names round trip") {
    for (auto mode : {SamplingMode::grid, SamplingMode::random, SamplingMode::adaptive}) {
        CHECK(sampling_mode_from_string(to_string(mode)) == mode);
    }
}
