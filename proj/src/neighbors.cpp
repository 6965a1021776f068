#include "declutter/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace declutter {

namespace {

constexpr std::size_t leaf_size = 16;

}

std::string to_string(SearchStrategy strategy) {
    return strategy == SearchStrategy::brute_force ? "brute" : "tree";
}

SearchStrategy search_strategy_from_string(const std::string& name) {
    if (name == "brute" || name == "brute-force") {
        return SearchStrategy::brute_force;
    }
    if (name == "tree" || name == "kd-tree" || name == "spatial-tree") {
        return SearchStrategy::spatial_tree;
    }
    throw Error("unknown search strategy '" + name + "'");
}

SearchStrategy default_strategy(const PointCloud& cloud, const Metric& metric) {
    if (cloud.is_matrix() || metric.triangle_constant != 1.0) {
        return SearchStrategy::brute_force;
    }
    return SearchStrategy::spatial_tree;
}

NeighborIndex::NeighborIndex(const PointCloud& cloud, const Metric& metric, SearchStrategy strategy)
    : NeighborIndex(cloud, metric, strategy, [&] {
          std::vector<PointId> all(cloud.size());
          std::iota(all.begin(), all.end(), PointId{0});
          return all;
      }()) {}

NeighborIndex::NeighborIndex(const PointCloud& cloud, const Metric& metric, SearchStrategy strategy,
                             std::vector<PointId> members)
    : cloud_(&cloud), metric_(metric), strategy_(strategy), members_(std::move(members)) {
    if (members_.empty()) {
        throw Error("neighbor index needs at least one point");
    }
    if (cloud.is_matrix() != (metric.kind == MetricKind::precomputed)) {
        throw Error("metric '" + to_string(metric.kind) + "' does not match the cloud storage");
    }
    std::vector<char> seen(cloud.size(), 0);
    for (PointId id : members_) {
        if (id >= cloud.size()) {
            throw Error("member id " + std::to_string(id) + " out of range");
        }
        if (seen[id]) {
            throw Error("duplicate member id " + std::to_string(id));
        }
        seen[id] = 1;
    }
    if (strategy_ == SearchStrategy::spatial_tree) {
        if (cloud.is_matrix()) {
            throw Error("spatial tree requires a coordinate-backed cloud");
        }
        if (metric.triangle_constant != 1.0) {
            throw Error("spatial tree requires an exact metric");
        }
        build_tree();
    }
}

void NeighborIndex::build_tree() {
    order_ = members_;
    nodes_.clear();
    box_lo_.clear();
    box_hi_.clear();
    nodes_.reserve(2 * (order_.size() / leaf_size + 1));
    build_node(0, order_.size());
}

std::size_t NeighborIndex::build_node(std::size_t begin, std::size_t end) {
    const std::size_t dim = cloud_->dimension();
    const std::size_t index = nodes_.size();
    nodes_.push_back(Node{begin, end});
    box_lo_.resize(box_lo_.size() + dim);
    box_hi_.resize(box_hi_.size() + dim);

    std::vector<double> lo(dim, INFINITY), hi(dim, -INFINITY);
    for (std::size_t i = begin; i < end; ++i) {
        auto p = cloud_->point(order_[i]);
        for (std::size_t d = 0; d < dim; ++d) {
            lo[d] = std::min(lo[d], p[d]);
            hi[d] = std::max(hi[d], p[d]);
        }
    }
    std::copy(lo.begin(), lo.end(), box_lo_.begin() + index * dim);
    std::copy(hi.begin(), hi.end(), box_hi_.begin() + index * dim);

    if (end - begin <= leaf_size) {
        return index;
    }
    std::size_t split = 0;
    double widest = -1;
    for (std::size_t d = 0; d < dim; ++d) {
        if (hi[d] - lo[d] > widest) {
            widest = hi[d] - lo[d];
            split = d;
        }
    }
    if (widest <= 0) {
        // All points coincide.
        return index;
    }
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](PointId a, PointId b) {
                         const double pa = cloud_->point(a)[split];
                         const double pb = cloud_->point(b)[split];
                         return pa < pb || (pa == pb && a < b);
                     });
    const std::size_t left = build_node(begin, mid);
    const std::size_t right = build_node(mid, end);
    nodes_[index].left = left;
    nodes_[index].right = right;
    nodes_[index].leaf = false;
    return index;
}

double NeighborIndex::cell_lower_bound(std::size_t node, std::span<const double> query) const {
    // Accumulated in the same order and form as distance(), so the bound never
    // exceeds any member distance after rounding.
    const std::size_t dim = query.size();
    const double* lo = box_lo_.data() + node * dim;
    const double* hi = box_hi_.data() + node * dim;
    double sum = 0;
    if (metric_.kind == MetricKind::euclidean) {
        for (std::size_t d = 0; d < dim; ++d) {
            double gap = 0;
            if (query[d] < lo[d]) {
                gap = lo[d] - query[d];
            } else if (query[d] > hi[d]) {
                gap = query[d] - hi[d];
            }
            sum += gap * gap;
        }
        return std::sqrt(sum);
    }
    for (std::size_t d = 0; d < dim; ++d) {
        if (query[d] < lo[d]) {
            sum += lo[d] - query[d];
        } else if (query[d] > hi[d]) {
            sum += query[d] - hi[d];
        }
    }
    return sum;
}

void NeighborIndex::search_knn(std::size_t node, std::span<const double> query, std::size_t k,
                               std::vector<Neighbor>& heap) const {
    if (heap.size() == k && cell_lower_bound(node, query) > heap.front().distance) {
        return;
    }
    const Node& n = nodes_[node];
    if (n.leaf) {
        for (std::size_t i = n.begin; i < n.end; ++i) {
            Neighbor candidate{order_[i], member_distance(order_[i], query)};
            if (heap.size() < k) {
                heap.push_back(candidate);
                std::push_heap(heap.begin(), heap.end(), neighbor_less);
            } else if (neighbor_less(candidate, heap.front())) {
                std::pop_heap(heap.begin(), heap.end(), neighbor_less);
                heap.back() = candidate;
                std::push_heap(heap.begin(), heap.end(), neighbor_less);
            }
        }
        return;
    }
    const double left_bound = cell_lower_bound(n.left, query);
    const double right_bound = cell_lower_bound(n.right, query);
    if (left_bound <= right_bound) {
        search_knn(n.left, query, k, heap);
        search_knn(n.right, query, k, heap);
    } else {
        search_knn(n.right, query, k, heap);
        search_knn(n.left, query, k, heap);
    }
}

void NeighborIndex::search_radius(std::size_t node, std::span<const double> query, double radius,
                                  std::vector<Neighbor>& out) const {
    if (cell_lower_bound(node, query) > radius) {
        return;
    }
    const Node& n = nodes_[node];
    if (n.leaf) {
        for (std::size_t i = n.begin; i < n.end; ++i) {
            const double d = member_distance(order_[i], query);
            if (d <= radius) {
                out.push_back({order_[i], d});
            }
        }
        return;
    }
    search_radius(n.left, query, radius, out);
    search_radius(n.right, query, radius, out);
}

double NeighborIndex::member_distance(PointId member, PointId query) const {
    return distance(metric_, *cloud_, member, query);
}

double NeighborIndex::member_distance(PointId member, std::span<const double> query) const {
    return distance(metric_, *cloud_, member, query);
}

void NeighborIndex::check_k(std::size_t k) const {
    if (k == 0) {
        throw Error("k must be at least 1");
    }
    if (k > members_.size()) {
        throw Error("k = " + std::to_string(k) + " exceeds the " + std::to_string(members_.size()) +
                    " indexed points");
    }
}

void NeighborIndex::check_query(std::span<const double> query) const {
    if (cloud_->is_matrix()) {
        throw Error("external coordinate queries are not supported on a distance-matrix cloud");
    }
    if (query.size() != cloud_->dimension()) {
        throw Error("query dimension " + std::to_string(query.size()) + " does not match cloud dimension " +
                    std::to_string(cloud_->dimension()));
    }
}

template<typename Query>
std::vector<Neighbor> NeighborIndex::scan_knn(const Query& query, std::size_t k) const {
    std::vector<Neighbor> all;
    all.reserve(members_.size());
    for (PointId id : members_) {
        all.push_back({id, member_distance(id, query)});
    }
    if (k < all.size()) {
        std::nth_element(all.begin(), all.begin() + k, all.end(), neighbor_less);
        all.resize(k);
    }
    std::sort(all.begin(), all.end(), neighbor_less);
    return all;
}

template<typename Query>
std::vector<Neighbor> NeighborIndex::scan_radius(const Query& query, double radius) const {
    std::vector<Neighbor> out;
    for (PointId id : members_) {
        const double d = member_distance(id, query);
        if (d <= radius) {
            out.push_back({id, d});
        }
    }
    std::sort(out.begin(), out.end(), neighbor_less);
    return out;
}

std::vector<Neighbor> NeighborIndex::k_nearest(PointId query, std::size_t k) const {
    check_k(k);
    if (query >= cloud_->size()) {
        throw Error("query id " + std::to_string(query) + " out of range");
    }
    if (strategy_ == SearchStrategy::brute_force) {
        return scan_knn(query, k);
    }
    return k_nearest(cloud_->point(query), k);
}

std::vector<Neighbor> NeighborIndex::k_nearest(std::span<const double> query, std::size_t k) const {
    check_k(k);
    check_query(query);
    // For large k a tree search visits most cells anyway.
    if (strategy_ == SearchStrategy::brute_force || 4 * k >= members_.size()) {
        return scan_knn(query, k);
    }
    std::vector<Neighbor> heap;
    heap.reserve(k);
    search_knn(0, query, k, heap);
    std::sort_heap(heap.begin(), heap.end(), neighbor_less);
    return heap;
}

std::vector<Neighbor> NeighborIndex::within(PointId query, double radius) const {
    if (query >= cloud_->size()) {
        throw Error("query id " + std::to_string(query) + " out of range");
    }
    if (strategy_ == SearchStrategy::brute_force) {
        return scan_radius(query, radius);
    }
    return within(cloud_->point(query), radius);
}

std::vector<Neighbor> NeighborIndex::within(std::span<const double> query, double radius) const {
    check_query(query);
    if (strategy_ == SearchStrategy::brute_force) {
        return scan_radius(query, radius);
    }
    std::vector<Neighbor> out;
    search_radius(0, query, radius, out);
    std::sort(out.begin(), out.end(), neighbor_less);
    return out;
}

RankedSubset::RankedSubset(const NeighborIndex& index)
    : index_(&index), rank_(index.cloud().size(), absent) {
    if (index.strategy() != SearchStrategy::spatial_tree) {
        return;
    }
    const auto& nodes = index.nodes_;
    node_min_rank_.assign(nodes.size(), absent);
    parent_.assign(nodes.size(), absent);
    leaf_of_.assign(index.cloud().size(), absent);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].leaf) {
            for (std::size_t j = nodes[i].begin; j < nodes[i].end; ++j) {
                leaf_of_[index.order_[j]] = i;
            }
        } else {
            parent_[nodes[i].left] = i;
            parent_[nodes[i].right] = i;
        }
    }
}

void RankedSubset::insert(PointId id) {
    if (id >= rank_.size() || (index_->strategy() == SearchStrategy::spatial_tree && leaf_of_[id] == absent)) {
        throw Error("point " + std::to_string(id) + " is not a member of the index");
    }
    if (rank_[id] != absent) {
        throw Error("point " + std::to_string(id) + " was already inserted");
    }
    const std::size_t rank = inserted_.size();
    rank_[id] = rank;
    inserted_.push_back(id);
    if (index_->strategy() == SearchStrategy::spatial_tree) {
        // Ranks only grow, so a node that already holds a member keeps its minimum.
        for (std::size_t node = leaf_of_[id]; node != absent && node_min_rank_[node] == absent; node = parent_[node]) {
            node_min_rank_[node] = rank;
        }
    }
}

std::optional<Neighbor> RankedSubset::earliest_within(PointId query, double radius) const {
    std::optional<Neighbor> best;
    if (index_->strategy() == SearchStrategy::brute_force) {
        for (PointId id : inserted_) {
            const double d = index_->member_distance(id, query);
            if (d <= radius) {
                return Neighbor{id, d};
            }
        }
        return best;
    }
    if (inserted_.empty()) {
        return best;
    }
    std::size_t best_rank = absent;
    search(0, index_->cloud().point(query), radius, best, best_rank);
    return best;
}

void RankedSubset::search(std::size_t node, std::span<const double> query, double radius,
                          std::optional<Neighbor>& best, std::size_t& best_rank) const {
    if (node_min_rank_[node] >= best_rank || index_->cell_lower_bound(node, query) > radius) {
        return;
    }
    const auto& n = index_->nodes_[node];
    if (n.leaf) {
        for (std::size_t i = n.begin; i < n.end; ++i) {
            const PointId id = index_->order_[i];
            if (rank_[id] >= best_rank) {
                continue;
            }
            const double d = index_->member_distance(id, query);
            if (d <= radius) {
                best = Neighbor{id, d};
                best_rank = rank_[id];
            }
        }
        return;
    }
    const bool left_first = node_min_rank_[n.left] <= node_min_rank_[n.right];
    search(left_first ? n.left : n.right, query, radius, best, best_rank);
    search(left_first ? n.right : n.left, query, radius, best, best_rank);
}

}
