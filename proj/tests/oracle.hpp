#ifndef DECLUTTER_TESTS_ORACLE_HPP
#define DECLUTTER_TESTS_ORACLE_HPP

// Naive reference implementations used as test oracles. They only share the
// point storage with the library: every distance, ordering and selection rule
// is re-implemented here from the definitions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using Point = std::vector<double>;

inline double l2(const Point& a, const Point& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    return std::sqrt(s);
}

/// (distance, index) pairs of every point, fully sorted.
inline std::vector<std::pair<double, std::size_t>> ranked(const std::vector<Point>& pts, const Point& q) {
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        all.emplace_back(l2(pts[i], q), i);
    }
    std::sort(all.begin(), all.end());
    return all;
}

inline double kdist(const std::vector<Point>& pts, const Point& q, std::size_t k) {
    auto r = ranked(pts, q);
    double s = 0;
    for (std::size_t i = 0; i < k; ++i) {
        s += r[i].first * r[i].first;
    }
    return std::sqrt(s / static_cast<double>(k));
}

inline double dist_to_set(const std::vector<Point>& pts, const Point& q) {
    double best = INFINITY;
    for (const auto& p : pts) {
        best = std::min(best, l2(p, q));
    }
    return best;
}

inline double hausdorff(const std::vector<Point>& a, const std::vector<Point>& b) {
    double h = 0;
    for (const auto& p : a) {
        h = std::max(h, dist_to_set(b, p));
    }
    for (const auto& p : b) {
        h = std::max(h, dist_to_set(a, p));
    }
    return h;
}

/// Quadratic greedy declutter over `subset` (indices into pts), rms k-distance over the subset.
inline std::vector<std::size_t> declutter(const std::vector<Point>& pts, const std::vector<std::size_t>& subset,
                                          std::size_t k, double factor = 2.0) {
    std::vector<Point> sub;
    for (auto i : subset) {
        sub.push_back(pts[i]);
    }
    std::vector<std::pair<double, std::size_t>> order;
    for (auto i : subset) {
        order.emplace_back(kdist(sub, pts[i], k), i);
    }
    std::sort(order.begin(), order.end());
    std::vector<std::size_t> kept;
    for (const auto& [d, i] : order) {
        bool blocked = false;
        for (auto q : kept) {
            if (l2(pts[q], pts[i]) <= factor * d) {
                blocked = true;
            }
        }
        if (!blocked) {
            kept.push_back(i);
        }
    }
    return kept;
}

inline std::vector<std::size_t> parfree(const std::vector<Point>& pts, double big_c) {
    std::vector<std::size_t> current(pts.size());
    std::iota(current.begin(), current.end(), std::size_t{0});
    int level = 0;
    while ((std::size_t{1} << (level + 1)) <= pts.size()) {
        ++level;
    }
    for (; level >= 1; --level) {
        const std::size_t k = std::size_t{1} << level;
        std::vector<Point> sub;
        for (auto i : current) {
            sub.push_back(pts[i]);
        }
        const auto kept = declutter(pts, current, k);
        std::vector<std::size_t> next;
        for (auto p : current) {
            for (auto q : kept) {
                if (l2(pts[p], pts[q]) <= big_c * kdist(sub, pts[q], k)) {
                    next.push_back(p);
                    break;
                }
            }
        }
        current = next;
    }
    return current;
}

inline std::vector<Point> random_points(std::mt19937_64& rng, std::size_t n, std::size_t dim, double lo = -1,
                                        double hi = 1) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<Point> pts(n, Point(dim));
    for (auto& p : pts) {
        for (auto& c : p) {
            c = u(rng);
        }
    }
    return pts;
}

}

#endif
