#include "declutter/robust_distance.hpp"

#include <cmath>

#include "declutter/io.hpp"
#include "declutter/parallel.hpp"

namespace declutter {

std::string to_string(DistanceKind kind) {
    switch (kind) {
    case DistanceKind::rms:
        return "rms";
    case DistanceKind::average:
        return "avg";
    case DistanceKind::kth_neighbor:
        return "kth";
    }
    return "unknown";
}

DistanceKind distance_kind_from_string(const std::string& name) {
    if (name == "rms" || name == "rms-k") {
        return DistanceKind::rms;
    }
    if (name == "avg" || name == "avg-k" || name == "average") {
        return DistanceKind::average;
    }
    if (name == "kth" || name == "kth-nn") {
        return DistanceKind::kth_neighbor;
    }
    throw Error("unknown distance kind '" + name + "'");
}

double reduce_neighbors(std::span<const Neighbor> neighbors, DistanceKind kind) {
    if (neighbors.empty()) {
        throw Error("robust distance needs at least one neighbor");
    }
    const double k = static_cast<double>(neighbors.size());
    switch (kind) {
    case DistanceKind::rms: {
        double sum = 0;
        for (const auto& n : neighbors) {
            sum += n.distance * n.distance;
        }
        return std::sqrt(sum / k);
    }
    case DistanceKind::average: {
        double sum = 0;
        for (const auto& n : neighbors) {
            sum += n.distance;
        }
        return sum / k;
    }
    case DistanceKind::kth_neighbor:
        return neighbors.back().distance;
    }
    throw Error("unknown distance kind");
}

double robust_distance_at(const NeighborIndex& index, PointId query, std::size_t k, DistanceKind kind) {
    const auto nn = index.k_nearest(query, k);
    return reduce_neighbors(nn, kind);
}

double robust_distance_at(const NeighborIndex& index, std::span<const double> query, std::size_t k,
                          DistanceKind kind) {
    const auto nn = index.k_nearest(query, k);
    return reduce_neighbors(nn, kind);
}

double RobustDistanceProfile::value_of(PointId id) const {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] == id) {
            return values[i];
        }
    }
    throw Error("point id " + std::to_string(id) + " is not in the profile");
}

std::unordered_map<PointId, std::size_t> RobustDistanceProfile::positions() const {
    std::unordered_map<PointId, std::size_t> map;
    map.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        map.emplace(ids[i], i);
    }
    return map;
}

RobustDistanceProfile profile(const NeighborIndex& index, std::size_t k, DistanceKind kind) {
    if (k == 0 || k > index.size()) {
        throw Error("k = " + std::to_string(k) + " must lie in [1, " + std::to_string(index.size()) + "]");
    }
    RobustDistanceProfile result;
    result.k = k;
    result.kind = kind;
    result.ids = index.members();
    result.values.resize(result.ids.size());
    parallel_for(result.ids.size(), [&](std::size_t i) {
        result.values[i] = robust_distance_at(index, result.ids[i], k, kind);
    });
    return result;
}

void write_profile_csv(std::ostream& out, const RobustDistanceProfile& profile) {
    io::write_id_values(out, profile.ids, profile.values, to_string(profile.kind) + "_k" + std::to_string(profile.k));
}

}
