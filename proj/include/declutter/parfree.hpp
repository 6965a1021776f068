#ifndef DECLUTTER_PARFREE_HPP
#define DECLUTTER_PARFREE_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "declutter/declutter.hpp"

/**
 * @file parfree.hpp
 *
 * @brief Parameter-free decluttering by alternating declutter and resample steps.
 *
 * Starting from k = 2^floor(log2 n) the current set is decluttered with
 * parameter k, then every point of the current set lying in a closed ball of
 * radius C * d_k(q) around some kept point q is re-admitted. k is halved
 * until the final step at k = 2. Robust distances are always recomputed over
 * the current set.
 */

namespace declutter {

/// Resampling constant for which the Hausdorff guarantee is proven.
inline const double theoretical_resampling_constant = 10.0 + 2.0 * std::sqrt(2.0);
/// Smaller constant that removes more noise in practice.
inline constexpr double practical_resampling_constant = 4.0;

struct ParfreeIteration {
    int level = 0;
    std::size_t k = 0;
    /// The current set P_level, ascending ids.
    std::vector<PointId> input;
    DeclutterResult decluttered;
    /// P_(level-1), ascending ids.
    std::vector<PointId> resampled;
};

struct ParfreeTrace {
    double resampling_constant = 0;
    DistanceKind kind = DistanceKind::rms;
    /// Set when n < 2: the loop is empty and the input is returned unchanged.
    bool degenerate = false;
    std::vector<ParfreeIteration> iterations;
};

struct ParfreeResult {
    /// P_0, ascending ids.
    std::vector<PointId> output;
    ParfreeTrace trace;
};

/**
 * Union of closed balls B(q, C d(q)) over q in `kept`, intersected with the
 * indexed set. `profile` must be computed over exactly the indexed members.
 */
std::vector<PointId> resample_step(const NeighborIndex& index, std::span<const PointId> kept,
                                   const RobustDistanceProfile& profile, double resampling_constant);

/**
 * floor(log2 n) for n >= 1.
 */
int initial_level(std::size_t n);

ParfreeResult parfree_declutter(const PointCloud& cloud, const Metric& metric, DistanceKind kind = DistanceKind::rms,
                                double resampling_constant = theoretical_resampling_constant,
                                SearchStrategy strategy = SearchStrategy::spatial_tree);

/**
 * Runs the loop on a subset of the cloud.
 */
ParfreeResult parfree_declutter(const PointCloud& cloud, const Metric& metric, std::vector<PointId> members,
                                DistanceKind kind, double resampling_constant, SearchStrategy strategy);

}

#endif
