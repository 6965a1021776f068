#ifndef DECLUTTER_TESTS_SUPPORT_HPP
#define DECLUTTER_TESTS_SUPPORT_HPP

#include <random>
#include <vector>

#include "declutter/geometry.hpp"
#include "oracle.hpp"

namespace test_support {

inline declutter::PointCloud to_cloud(const std::vector<oracle::Point>& pts) {
    return declutter::PointCloud::from_rows(pts);
}

inline declutter::PointCloud line(std::initializer_list<double> xs) {
    std::vector<oracle::Point> rows;
    for (double x : xs) {
        rows.push_back({x});
    }
    return to_cloud(rows);
}

inline std::vector<oracle::Point> rows_of(const declutter::PointCloud& cloud) {
    std::vector<oracle::Point> rows;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        auto p = cloud.point(i);
        rows.emplace_back(p.begin(), p.end());
    }
    return rows;
}

/// Random cloud with a mix of clustered points, a few duplicates and scattered outliers.
inline std::vector<oracle::Point> random_instance(std::mt19937_64& rng, std::size_t max_n = 500,
                                                  std::size_t max_dim = 5) {
    std::uniform_int_distribution<std::size_t> n_dist(8, max_n);
    std::uniform_int_distribution<std::size_t> d_dist(1, max_dim);
    const std::size_t n = n_dist(rng);
    const std::size_t dim = d_dist(rng);
    auto pts = oracle::random_points(rng, n, dim);
    std::normal_distribution<double> jitter(0.0, 0.05);
    std::uniform_real_distribution<double> u(0, 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = u(rng);
        if (r < 0.5 && i > 0) {
            pts[i] = pts[i / 2];
            for (auto& c : pts[i]) {
                c += jitter(rng);
            }
        } else if (r < 0.55 && i > 0) {
            pts[i] = pts[i - 1];
        }
    }
    return pts;
}

}

#endif
