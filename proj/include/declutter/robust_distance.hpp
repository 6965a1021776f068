#ifndef DECLUTTER_ROBUST_DISTANCE_HPP
#define DECLUTTER_ROBUST_DISTANCE_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "declutter/neighbors.hpp"

/**
 * @file robust_distance.hpp
 *
 * @brief Outlier-robust distance estimates built from the k nearest neighbors.
 *
 * All three estimates dominate the plain distance to the point set and are
 * 1-Lipschitz under an exact metric:
 *
 * - `rms`: root mean square of the k nearest distances (the k-distance, also
 *   called distance to the empirical measure with mass k/n).
 * - `average`: arithmetic mean of the k nearest distances.
 * - `kth_neighbor`: distance to the k-th nearest neighbor, as used for density nets.
 */

namespace declutter {

enum class DistanceKind { rms, average, kth_neighbor };

std::string to_string(DistanceKind kind);
DistanceKind distance_kind_from_string(const std::string& name);

/**
 * @brief A robust distance kind plus its Lipschitz constant.
 *
 * `lipschitz_constant` is metadata used by the relaxed bound calculator; the
 * three built-in kinds are exactly 1-Lipschitz.
 */
struct RobustDistance {
    DistanceKind kind = DistanceKind::rms;
    double lipschitz_constant = 1.0;
};

/**
 * Reduces sorted neighbor distances to a single robust distance.
 */
double reduce_neighbors(std::span<const Neighbor> neighbors, DistanceKind kind);

double robust_distance_at(const NeighborIndex& index, PointId query, std::size_t k, DistanceKind kind);
double robust_distance_at(const NeighborIndex& index, std::span<const double> query, std::size_t k,
                          DistanceKind kind);

/**
 * @brief Robust distance of every indexed point to the indexed set itself.
 */
struct RobustDistanceProfile {
    std::size_t k = 0;
    DistanceKind kind = DistanceKind::rms;
    std::vector<PointId> ids;
    std::vector<double> values;

    std::size_t size() const { return ids.size(); }

    /**
     * @return The value for cloud id `id`; throws if the id is not profiled.
     */
    double value_of(PointId id) const;

    /**
     * Maps each profiled cloud id to its position in `ids`.
     */
    std::unordered_map<PointId, std::size_t> positions() const;
};

/**
 * Evaluates the robust distance at every member of `index`, in member order.
 */
RobustDistanceProfile profile(const NeighborIndex& index, std::size_t k, DistanceKind kind);

void write_profile_csv(std::ostream& out, const RobustDistanceProfile& profile);

}

#endif
