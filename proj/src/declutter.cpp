#include "declutter/declutter.hpp"

#include <algorithm>
#include <numeric>

namespace declutter {

std::vector<PointId> DeclutterResult::kept_sorted() const {
    std::vector<PointId> ids = kept;
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::optional<Rejection> DeclutterResult::rejection_of(PointId id) const {
    for (const auto& r : rejected) {
        if (r.id == id) {
            return r;
        }
    }
    return std::nullopt;
}

DeclutterResult declutter(const NeighborIndex& index, RobustDistanceProfile profile, double vicinity_factor,
                          KeptLookup lookup) {
    if (!(vicinity_factor > 0)) {
        throw Error("vicinity factor must be positive");
    }
    if (profile.ids != index.members()) {
        throw Error("profile does not cover exactly the indexed points");
    }

    const std::size_t n = profile.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double va = profile.values[a];
        const double vb = profile.values[b];
        return va < vb || (va == vb && profile.ids[a] < profile.ids[b]);
    });

    DeclutterResult result;
    result.k = profile.k;
    result.vicinity_factor = vicinity_factor;
    result.order.reserve(n);

    const PointCloud& cloud = index.cloud();
    const Metric& metric = index.metric();
    RankedSubset kept(index);

    for (std::size_t pos : order) {
        const PointId id = profile.ids[pos];
        const double radius = vicinity_factor * profile.values[pos];
        result.order.push_back(id);

        // The witness is the earliest kept point inside the ball.
        std::optional<Neighbor> witness;
        if (lookup == KeptLookup::range_query) {
            witness = kept.earliest_within(id, radius);
        } else {
            for (PointId q : result.kept) {
                const double d = distance(metric, cloud, q, id);
                if (d <= radius) {
                    witness = Neighbor{q, d};
                    break;
                }
            }
        }

        if (witness) {
            result.rejected.push_back({id, witness->id, witness->distance, radius});
        } else {
            kept.insert(id);
            result.kept.push_back(id);
        }
    }
    result.profile = std::move(profile);
    return result;
}

DeclutterResult declutter(const NeighborIndex& index, std::size_t k, DistanceKind kind, double vicinity_factor,
                          KeptLookup lookup) {
    return declutter(index, profile(index, k, kind), vicinity_factor, lookup);
}

DeclutterResult declutter(const PointCloud& cloud, const Metric& metric, std::size_t k, DistanceKind kind,
                          double vicinity_factor) {
    const NeighborIndex index(cloud, metric, default_strategy(cloud, metric));
    return declutter(index, k, kind, vicinity_factor);
}

}
