#include <doctest.h>

#include <algorithm>
#include <random>

#include "declutter/neighbors.hpp"
#include "support.hpp"

using namespace declutter;

namespace {

/// k nearest by full sort under (distance, index); the oracle for every query.
std::vector<Neighbor> sorted_oracle(const std::vector<oracle::Point>& pts, const oracle::Point& q, std::size_t k) {
    std::vector<Neighbor> out;
    for (const auto& [d, i] : oracle::ranked(pts, q)) {
        if (out.size() == k) {
            break;
        }
        out.push_back({i, d});
    }
    return out;
}

}

TEST_CASE("k_nearest on the four-point line") {
    const auto cloud = test_support::line({0, 1, 2, 100});
    for (auto strategy : {SearchStrategy::brute_force, SearchStrategy::spatial_tree}) {
        const NeighborIndex index(cloud, Metric{}, strategy);
        const auto nn = index.k_nearest(PointId{3}, 2);
        REQUIRE(nn.size() == 2);
        CHECK(nn[0] == Neighbor{3, 0.0});
        CHECK(nn[1] == Neighbor{2, 98.0});
    }
}

TEST_CASE("k_nearest self query, exhaustive query and argument errors") {
    const auto cloud = test_support::line({5, 1, 3, 1});
    const NeighborIndex index(cloud, Metric{}, SearchStrategy::brute_force);
    CHECK(index.k_nearest(PointId{2}, 1) == std::vector<Neighbor>{{2, 0.0}});
    // Coincident points: self still comes first only when it has the lower id.
    CHECK(index.k_nearest(PointId{3}, 1) == std::vector<Neighbor>{{1, 0.0}});
    const auto all = index.k_nearest(PointId{0}, 4);
    CHECK(all == std::vector<Neighbor>{{0, 0.0}, {2, 2.0}, {1, 4.0}, {3, 4.0}});
    CHECK_THROWS_AS(index.k_nearest(PointId{0}, 5), Error);
    CHECK_THROWS_AS(index.k_nearest(PointId{0}, 0), Error);
    const std::vector<double> wrong_dim{1.0, 2.0};
    CHECK_THROWS_AS(index.k_nearest(wrong_dim, 1), Error);
}

TEST_CASE("index construction") {
    CHECK_NOTHROW(NeighborIndex(test_support::line({1}), Metric{}, SearchStrategy::brute_force));
    std::mt19937_64 rng(1);
    const auto big = test_support::to_cloud(oracle::random_points(rng, 1000, 3));
    const NeighborIndex tree(big, Metric{}, SearchStrategy::spatial_tree);
    CHECK(tree.size() == 1000);
    const auto matrix = PointCloud::from_distance_matrix({0, 1, 1, 0}, 2);
    CHECK_THROWS_AS(NeighborIndex(matrix, metric_for(matrix), SearchStrategy::spatial_tree), Error);
    CHECK_THROWS_AS(NeighborIndex(big, Metric{MetricKind::euclidean, 1.5}, SearchStrategy::spatial_tree), Error);
    CHECK_THROWS_AS(NeighborIndex(big, Metric{}, SearchStrategy::brute_force, {0, 0}), Error);
    CHECK_THROWS_AS(NeighborIndex(big, Metric{}, SearchStrategy::brute_force, {1000}), Error);
}

TEST_CASE("matrix queries") {
    // clang-format off
    const auto cloud = PointCloud::from_distance_matrix({0, 2, 1,
                                                         2, 0, 1,
                                                         1, 1, 0}, 3);
    // clang-format on
    const NeighborIndex index(cloud, metric_for(cloud), SearchStrategy::brute_force);
    CHECK(index.k_nearest(PointId{0}, 3) == std::vector<Neighbor>{{0, 0.0}, {2, 1.0}, {1, 2.0}});
    const std::vector<double> external{0.0};
    CHECK_THROWS_AS(index.k_nearest(external, 1), Error);
}

TEST_CASE("tree and brute force agree with the sorting oracle on 100 random clouds") {
    std::mt19937_64 rng(2024);
    for (int instance = 0; instance < 100; ++instance) {
        const auto pts = test_support::random_instance(rng);
        const auto cloud = test_support::to_cloud(pts);
        const NeighborIndex brute(cloud, Metric{}, SearchStrategy::brute_force);
        const NeighborIndex tree(cloud, Metric{}, SearchStrategy::spatial_tree);
        std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
        std::uniform_int_distribution<std::size_t> pick_k(1, pts.size());
        for (int q = 0; q < 10; ++q) {
            const PointId id = pick(rng);
            const std::size_t k = q < 5 ? std::min<std::size_t>(pick_k(rng), 40) : pick_k(rng);
            const auto expected = sorted_oracle(pts, pts[id], k);
            CHECK(brute.k_nearest(id, k) == expected);
            CHECK(tree.k_nearest(id, k) == expected);
            // External query point.
            auto external = oracle::random_points(rng, 1, pts[0].size()).front();
            const auto expected_ext = sorted_oracle(pts, external, k);
            CHECK(tree.k_nearest(external, k) == expected_ext);
            CHECK(brute.k_nearest(external, k) == expected_ext);
        }
    }
}

TEST_CASE("results are sorted and nested in k") {
    std::mt19937_64 rng(5);
    for (int instance = 0; instance < 20; ++instance) {
        const auto pts = test_support::random_instance(rng, 200);
        const auto cloud = test_support::to_cloud(pts);
        const NeighborIndex tree(cloud, Metric{}, SearchStrategy::spatial_tree);
        const PointId q = rng() % pts.size();
        auto previous = tree.k_nearest(q, 1);
        for (std::size_t k = 2; k <= std::min<std::size_t>(pts.size(), 60); ++k) {
            const auto current = tree.k_nearest(q, k);
            for (std::size_t i = 1; i < current.size(); ++i) {
                CHECK(current[i - 1].distance <= current[i].distance);
            }
            CHECK(std::equal(previous.begin(), previous.end(), current.begin()));
            previous = current;
        }
    }
}

TEST_CASE("range queries agree between strategies") {
    std::mt19937_64 rng(77);
    for (int instance = 0; instance < 30; ++instance) {
        const auto pts = test_support::random_instance(rng, 300, 3);
        const auto cloud = test_support::to_cloud(pts);
        for (auto kind : {MetricKind::euclidean, MetricKind::manhattan}) {
            const Metric metric{kind, 1.0};
            const NeighborIndex brute(cloud, metric, SearchStrategy::brute_force);
            const NeighborIndex tree(cloud, metric, SearchStrategy::spatial_tree);
            const PointId q = rng() % pts.size();
            const double radius = std::uniform_real_distribution<double>(0, 0.5)(rng);
            const auto expected = brute.within(q, radius);
            CHECK(tree.within(q, radius) == expected);
            for (const auto& nb : expected) {
                CHECK(nb.distance <= radius);
            }
        }
    }
}

TEST_CASE("member subsets are indexed by original ids") {
    const auto cloud = test_support::line({0, 10, 1, 11, 2});
    for (auto strategy : {SearchStrategy::brute_force, SearchStrategy::spatial_tree}) {
        const NeighborIndex index(cloud, Metric{}, strategy, {1, 3});
        CHECK(index.k_nearest(PointId{0}, 2) == std::vector<Neighbor>{{1, 10.0}, {3, 11.0}});
        CHECK(index.nearest(PointId{4}).id == 1);
    }
}

TEST_CASE("ranked subsets return the earliest inserted member inside the ball") {
    std::mt19937_64 rng(78);
    for (int instance = 0; instance < 40; ++instance) {
        const auto pts = test_support::random_instance(rng, 300, 3);
        const auto cloud = test_support::to_cloud(pts);
        const NeighborIndex brute(cloud, Metric{}, SearchStrategy::brute_force);
        const NeighborIndex tree(cloud, Metric{}, SearchStrategy::spatial_tree);
        RankedSubset a(brute);
        RankedSubset b(tree);
        std::vector<PointId> inserted;
        for (PointId id = 0; id < pts.size(); ++id) {
            if (rng() % 4 == 0) {
                inserted.push_back(id);
            }
        }
        inserted.push_back(pts.size() - 1);
        inserted.erase(std::unique(inserted.begin(), inserted.end()), inserted.end());
        std::shuffle(inserted.begin(), inserted.end(), rng);
        for (PointId id : inserted) {
            a.insert(id);
            b.insert(id);
        }
        for (int q = 0; q < 20; ++q) {
            const PointId query = rng() % pts.size();
            const double radius = std::uniform_real_distribution<double>(0, 1.0)(rng);
            std::optional<Neighbor> expected;
            for (PointId id : inserted) {
                const double d = oracle::l2(pts[id], pts[query]);
                if (d <= radius) {
                    expected = Neighbor{id, d};
                    break;
                }
            }
            const auto ga = a.earliest_within(query, radius);
            const auto gb = b.earliest_within(query, radius);
            REQUIRE(ga.has_value() == expected.has_value());
            REQUIRE(gb.has_value() == expected.has_value());
            if (expected) {
                CHECK(ga->id == expected->id);
                CHECK(gb->id == expected->id);
            }
        }
        CHECK_THROWS_AS(a.insert(inserted.front()), Error);
    }
}
