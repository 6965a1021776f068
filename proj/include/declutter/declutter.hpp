#ifndef DECLUTTER_DECLUTTER_HPP
#define DECLUTTER_DECLUTTER_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "declutter/neighbors.hpp"
#include "declutter/robust_distance.hpp"

/**
 * @file declutter.hpp
 *
 * @brief Greedy single-parameter decluttering.
 *
 * Points are visited by increasing robust distance (ties by id). A point is
 * kept unless an already kept point lies in its closed vicinity ball of
 * radius `vicinity_factor * d(p)`. Outliers have large robust distances and
 * hence large vicinities, which reach back to the well-sampled region where
 * a better point has already been kept.
 */

namespace declutter {

struct Rejection {
    PointId id;
    /// Earliest kept point (in selection order) inside the vicinity ball.
    PointId witness;
    double distance;
    double radius;
};

struct DeclutterResult {
    std::size_t k = 0;
    double vicinity_factor = 2.0;
    RobustDistanceProfile profile;
    /// Every processed id, by increasing robust distance.
    std::vector<PointId> order;
    /// Kept ids in selection order.
    std::vector<PointId> kept;
    /// Rejected ids in processing order.
    std::vector<Rejection> rejected;

    std::vector<PointId> kept_sorted() const;
    std::optional<Rejection> rejection_of(PointId id) const;
};

/// How the vicinity ball is tested against the kept set.
enum class KeptLookup {
    /// Closed-ball range query on the neighbor index, filtered to kept ids.
    range_query,
    /// Linear scan over the kept ids.
    kept_scan,
};

/**
 * Declutters the members of `index` using a precomputed profile over exactly those members.
 */
DeclutterResult declutter(const NeighborIndex& index, RobustDistanceProfile profile, double vicinity_factor = 2.0,
                          KeptLookup lookup = KeptLookup::range_query);

DeclutterResult declutter(const NeighborIndex& index, std::size_t k, DistanceKind kind = DistanceKind::rms,
                          double vicinity_factor = 2.0, KeptLookup lookup = KeptLookup::range_query);

/**
 * Convenience overload over the whole cloud. Uses a spatial tree for
 * coordinate clouds and brute force for distance matrices.
 */
DeclutterResult declutter(const PointCloud& cloud, const Metric& metric, std::size_t k,
                          DistanceKind kind = DistanceKind::rms, double vicinity_factor = 2.0);

}

#endif
