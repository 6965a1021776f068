#include <doctest.h>

#include <algorithm>
#include <random>

#include "declutter/declutter.hpp"
#include "support.hpp"

using namespace declutter;

namespace {

std::vector<PointId> sorted(std::vector<PointId> ids) {
    std::sort(ids.begin(), ids.end());
    return ids;
}

void check_invariants(const PointCloud& cloud, const Metric& metric, const DeclutterResult& r) {
    const std::size_t n = r.order.size();
    std::vector<std::size_t> rank(cloud.size(), n);
    for (std::size_t i = 0; i < n; ++i) {
        rank[r.order[i]] = i;
    }
    // Processing order is sorted by (value, id).
    for (std::size_t i = 1; i < n; ++i) {
        const double a = r.profile.value_of(r.order[i - 1]);
        const double b = r.profile.value_of(r.order[i]);
        CHECK((a < b || (a == b && r.order[i - 1] < r.order[i])));
    }
    CHECK(r.kept.front() == r.order.front());
    // Kept and rejected partition the input.
    std::vector<PointId> all = r.kept;
    for (const auto& rej : r.rejected) {
        all.push_back(rej.id);
    }
    CHECK(sorted(all) == sorted(r.order));
    for (const auto& rej : r.rejected) {
        CHECK(rank[rej.witness] < rank[rej.id]);
        CHECK(std::find(r.kept.begin(), r.kept.end(), rej.witness) != r.kept.end());
        CHECK(rej.distance == distance(metric, cloud, rej.id, rej.witness));
        CHECK(rej.radius == r.vicinity_factor * r.profile.value_of(rej.id));
        CHECK(rej.distance <= rej.radius);
    }
    for (std::size_t i = 0; i < r.kept.size(); ++i) {
        const double radius = r.vicinity_factor * r.profile.value_of(r.kept[i]);
        for (std::size_t j = 0; j < i; ++j) {
            CHECK(distance(metric, cloud, r.kept[i], r.kept[j]) > radius);
        }
    }
}

}

TEST_CASE("declutter keeps 0 and 2 on the four-point line") {
    const auto cloud = test_support::line({0, 1, 2, 100});
    const auto result = declutter::declutter(cloud, Metric{}, 2);
    CHECK(result.kept == std::vector<PointId>{0, 2});
    CHECK(result.order == std::vector<PointId>{0, 1, 2, 3});
    REQUIRE(result.rejection_of(1));
    CHECK(result.rejection_of(1)->witness == 0);
    REQUIRE(result.rejection_of(3));
    CHECK(result.rejection_of(3)->witness == 0);
    CHECK(!result.rejection_of(0));
    CHECK(sorted(result.kept) ==
          sorted(oracle::declutter(test_support::rows_of(cloud), {0, 1, 2, 3}, 2)));
    check_invariants(cloud, Metric{}, result);
}

TEST_CASE("declutter of a singleton and of coincident points") {
    CHECK(declutter::declutter(test_support::line({3}), Metric{}, 1).kept == std::vector<PointId>{0});
    const auto same = test_support::line({1, 1, 1, 1});
    const auto result = declutter::declutter(same, Metric{}, 4);
    CHECK(result.kept == std::vector<PointId>{0});
    CHECK(result.rejected.size() == 3);
}

TEST_CASE("declutter argument errors") {
    const auto cloud = test_support::line({0, 1, 2});
    CHECK_THROWS_AS(declutter::declutter(cloud, Metric{}, 0), Error);
    CHECK_THROWS_AS(declutter::declutter(cloud, Metric{}, 4), Error);
    CHECK_THROWS_AS(declutter::declutter(cloud, Metric{}, 2, DistanceKind::rms, 0.0), Error);
    const NeighborIndex index(cloud, Metric{}, SearchStrategy::brute_force);
    const NeighborIndex other(cloud, Metric{}, SearchStrategy::brute_force, {0, 1});
    CHECK_THROWS_AS(declutter::declutter(index, profile(other, 1, DistanceKind::rms)), Error);
}

TEST_CASE("declutter on a distance matrix") {
    // The same four-point line expressed as a matrix.
    const std::vector<double> x{0, 1, 2, 100};
    std::vector<double> flat;
    for (double a : x) {
        for (double b : x) {
            flat.push_back(std::abs(a - b));
        }
    }
    const auto matrix = PointCloud::from_distance_matrix(flat, 4);
    CHECK(declutter::declutter(matrix, metric_for(matrix), 2).kept == std::vector<PointId>{0, 2});
}

TEST_CASE("declutter matches the quadratic oracle and its invariants on random clouds") {
    std::mt19937_64 rng(99);
    for (int instance = 0; instance < 60; ++instance) {
        const auto pts = test_support::random_instance(rng, 200);
        const auto cloud = test_support::to_cloud(pts);
        const std::size_t k = 1 + rng() % std::min<std::size_t>(pts.size(), 24);
        const auto result = declutter::declutter(cloud, Metric{}, k);
        std::vector<std::size_t> all(pts.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        CHECK(result.kept == oracle::declutter(pts, all, k));
        check_invariants(cloud, Metric{}, result);
    }
}

TEST_CASE("declutter invariants for other kinds, metrics and vicinity factors") {
    std::mt19937_64 rng(4);
    for (int instance = 0; instance < 30; ++instance) {
        const auto cloud = test_support::to_cloud(test_support::random_instance(rng, 150));
        const Metric metric{instance % 2 ? MetricKind::manhattan : MetricKind::euclidean, 1.0};
        const auto kind = static_cast<DistanceKind>(instance % 3);
        const double factor = 0.5 + (instance % 4);
        const std::size_t k = 1 + rng() % std::min<std::size_t>(cloud.size(), 12);
        check_invariants(cloud, metric, declutter::declutter(cloud, metric, k, kind, factor));
    }
}

TEST_CASE("both kept lookups and both search strategies agree id for id") {
    std::mt19937_64 rng(100);
    for (int instance = 0; instance < 100; ++instance) {
        const auto cloud = test_support::to_cloud(test_support::random_instance(rng, 300));
        const std::size_t k = 1 + rng() % std::min<std::size_t>(cloud.size(), 32);
        const NeighborIndex brute(cloud, Metric{}, SearchStrategy::brute_force);
        const NeighborIndex tree(cloud, Metric{}, SearchStrategy::spatial_tree);
        const auto reference = declutter::declutter(brute, k, DistanceKind::rms, 2.0, KeptLookup::kept_scan);
        for (const auto* index : {&brute, &tree}) {
            for (auto lookup : {KeptLookup::range_query, KeptLookup::kept_scan}) {
                const auto r = declutter::declutter(*index, k, DistanceKind::rms, 2.0, lookup);
                CHECK(r.kept == reference.kept);
                CHECK(r.order == reference.order);
                REQUIRE(r.rejected.size() == reference.rejected.size());
                for (std::size_t i = 0; i < r.rejected.size(); ++i) {
                    CHECK(r.rejected[i].id == reference.rejected[i].id);
                    CHECK(r.rejected[i].witness == reference.rejected[i].witness);
                }
            }
        }
    }
}

TEST_CASE("witness is the earliest kept point inside the vicinity ball") {
    std::mt19937_64 rng(17);
    const auto cloud = test_support::to_cloud(test_support::random_instance(rng, 300, 2));
    const auto r = declutter::declutter(cloud, Metric{}, 4);
    for (const auto& rej : r.rejected) {
        const auto pos = std::find(r.order.begin(), r.order.end(), rej.id) - r.order.begin();
        for (PointId q : r.kept) {
            if (q == rej.witness) {
                break;
            }
            const auto qpos = std::find(r.order.begin(), r.order.end(), q) - r.order.begin();
            CHECK(qpos < pos);
            CHECK(distance(Metric{}, cloud, rej.id, q) > rej.radius);
        }
    }
}

TEST_CASE("declutter on a member subset") {
    const auto cloud = test_support::line({0, 1, 2, 100, 0.5});
    const NeighborIndex index(cloud, Metric{}, SearchStrategy::spatial_tree, {0, 1, 2, 3});
    const auto r = declutter::declutter(index, 2);
    CHECK(r.kept == std::vector<PointId>{0, 2});
}
