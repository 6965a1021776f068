#include "declutter/parfree.hpp"

#include <algorithm>
#include <numeric>

namespace declutter {

int initial_level(std::size_t n) {
    if (n == 0) {
        throw Error("empty point set");
    }
    int level = 0;
    while ((std::size_t{1} << (level + 1)) <= n) {
        ++level;
    }
    return level;
}

std::vector<PointId> resample_step(const NeighborIndex& index, std::span<const PointId> kept,
                                   const RobustDistanceProfile& profile, double resampling_constant) {
    if (!(resampling_constant > 0)) {
        throw Error("resampling constant must be positive");
    }
    if (profile.ids != index.members()) {
        throw Error("profile was not computed over the resampled set");
    }
    const auto position = profile.positions();
    std::vector<char> captured(index.cloud().size(), 0);
    for (PointId q : kept) {
        auto it = position.find(q);
        if (it == position.end()) {
            throw Error("kept point " + std::to_string(q) + " is not in the current set");
        }
        const double radius = resampling_constant * profile.values[it->second];
        for (const auto& n : index.within(q, radius)) {
            captured[n.id] = 1;
        }
    }
    std::vector<PointId> out;
    for (PointId id : index.members()) {
        if (captured[id]) {
            out.push_back(id);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

ParfreeResult parfree_declutter(const PointCloud& cloud, const Metric& metric, DistanceKind kind,
                                double resampling_constant, SearchStrategy strategy) {
    std::vector<PointId> all(cloud.size());
    std::iota(all.begin(), all.end(), PointId{0});
    return parfree_declutter(cloud, metric, std::move(all), kind, resampling_constant, strategy);
}

ParfreeResult parfree_declutter(const PointCloud& cloud, const Metric& metric, std::vector<PointId> members,
                                DistanceKind kind, double resampling_constant, SearchStrategy strategy) {
    if (!(resampling_constant > 0)) {
        throw Error("resampling constant must be positive");
    }
    if (members.empty()) {
        throw Error("parameter-free declutter needs at least one point");
    }
    if (cloud.is_matrix() && strategy == SearchStrategy::spatial_tree) {
        strategy = SearchStrategy::brute_force;
    }
    std::sort(members.begin(), members.end());

    ParfreeResult result;
    result.trace.resampling_constant = resampling_constant;
    result.trace.kind = kind;

    const int top = initial_level(members.size());
    if (top == 0) {
        result.trace.degenerate = true;
        result.output = std::move(members);
        return result;
    }

    std::vector<PointId> current = std::move(members);
    for (int level = top; level >= 1; --level) {
        const std::size_t k = std::size_t{1} << level;
        const NeighborIndex index(cloud, metric, strategy, current);
        ParfreeIteration step;
        step.level = level;
        step.k = k;
        step.input = current;
        step.decluttered = declutter(index, profile(index, k, kind));
        step.resampled =
            resample_step(index, step.decluttered.kept, step.decluttered.profile, resampling_constant);
        current = step.resampled;
        result.trace.iterations.push_back(std::move(step));
    }
    result.output = std::move(current);
    return result;
}

}
