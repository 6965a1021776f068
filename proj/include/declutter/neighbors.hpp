#ifndef DECLUTTER_NEIGHBORS_HPP
#define DECLUTTER_NEIGHBORS_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "declutter/geometry.hpp"

/**
 * @file neighbors.hpp
 *
 * @brief Exact k-nearest-neighbor and fixed-radius queries.
 */

namespace declutter {

struct Neighbor {
    PointId id;
    double distance;

    bool operator==(const Neighbor&) const = default;
};

/**
 * Total order used by every query: ascending distance, then ascending id.
 */
inline bool neighbor_less(const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
}

enum class SearchStrategy { brute_force, spatial_tree };

std::string to_string(SearchStrategy strategy);
SearchStrategy search_strategy_from_string(const std::string& name);

/**
 * Spatial tree for coordinate clouds under an exact metric, brute force otherwise.
 */
SearchStrategy default_strategy(const PointCloud& cloud, const Metric& metric);

/**
 * @brief Exact neighbor index over a subset of a cloud's points.
 *
 * Results always carry the cloud's own ids. Members may be any duplicate-free
 * subset of the cloud; queries only ever return members. The cloud must
 * outlive the index.
 *
 * Both strategies return identical id sequences because both rank by the
 * same (distance, id) order over the same distance evaluations. The spatial
 * tree only prunes a cell when its lower bound strictly exceeds the current
 * cut-off, so tied candidates are never skipped.
 */
class NeighborIndex {
public:
    NeighborIndex(const PointCloud& cloud, const Metric& metric, SearchStrategy strategy);
    NeighborIndex(const PointCloud& cloud, const Metric& metric, SearchStrategy strategy,
                  std::vector<PointId> members);

    std::size_t size() const { return members_.size(); }
    const std::vector<PointId>& members() const { return members_; }
    const PointCloud& cloud() const { return *cloud_; }
    const Metric& metric() const { return metric_; }
    SearchStrategy strategy() const { return strategy_; }

    /**
     * The `k` members closest to cloud point `query` (which need not be a member).
     * A member query finds itself first, at distance 0.
     */
    std::vector<Neighbor> k_nearest(PointId query, std::size_t k) const;

    /**
     * The `k` members closest to an external coordinate point (coordinate clouds only).
     */
    std::vector<Neighbor> k_nearest(std::span<const double> query, std::size_t k) const;

    /**
     * All members in the closed ball of `radius` around the query, in neighbor order.
     */
    std::vector<Neighbor> within(PointId query, double radius) const;
    std::vector<Neighbor> within(std::span<const double> query, double radius) const;

    Neighbor nearest(PointId query) const { return k_nearest(query, 1).front(); }
    Neighbor nearest(std::span<const double> query) const { return k_nearest(query, 1).front(); }

private:
    friend class RankedSubset;

    struct Node {
        std::size_t begin;
        std::size_t end;
        std::size_t left = 0;
        std::size_t right = 0;
        bool leaf = true;
    };

    void build_tree();
    std::size_t build_node(std::size_t begin, std::size_t end);
    double cell_lower_bound(std::size_t node, std::span<const double> query) const;
    void search_knn(std::size_t node, std::span<const double> query, std::size_t k,
                    std::vector<Neighbor>& heap) const;
    void search_radius(std::size_t node, std::span<const double> query, double radius,
                       std::vector<Neighbor>& out) const;

    double member_distance(PointId member, PointId query) const;
    double member_distance(PointId member, std::span<const double> query) const;
    void check_k(std::size_t k) const;
    void check_query(std::span<const double> query) const;

    template<typename Query>
    std::vector<Neighbor> scan_knn(const Query& query, std::size_t k) const;
    template<typename Query>
    std::vector<Neighbor> scan_radius(const Query& query, double radius) const;

    const PointCloud* cloud_;
    Metric metric_;
    SearchStrategy strategy_;
    std::vector<PointId> members_;

    // Spatial tree state: members permuted into cell order, per-node bounding boxes.
    std::vector<PointId> order_;
    std::vector<Node> nodes_;
    std::vector<double> box_lo_;
    std::vector<double> box_hi_;
};

/**
 * A growing subset of an index's members in insertion order. Answers which
 * inserted member came first among those inside a closed ball, pruning tree
 * cells by the earliest rank they contain.
 */
class RankedSubset {
public:
    explicit RankedSubset(const NeighborIndex& index);

    /// Adds a member; its rank is the number of members inserted before it.
    void insert(PointId id);

    const std::vector<PointId>& members() const { return inserted_; }
    bool contains(PointId id) const { return id < rank_.size() && rank_[id] != absent; }

    std::optional<Neighbor> earliest_within(PointId query, double radius) const;

private:
    static constexpr std::size_t absent = static_cast<std::size_t>(-1);

    void search(std::size_t node, std::span<const double> query, double radius, std::optional<Neighbor>& best,
                std::size_t& best_rank) const;

    const NeighborIndex* index_;
    std::vector<PointId> inserted_;
    std::vector<std::size_t> rank_;
    std::vector<std::size_t> node_min_rank_;
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> leaf_of_;
};

}

#endif
