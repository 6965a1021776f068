#include "declutter/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "declutter/parallel.hpp"

namespace declutter {

double SamplingCertificate::weak_epsilon() const {
    return std::max(0.0, coverage_term);
}

SamplingCertificate certify(const PointCloud& cloud, const Metric& metric, std::span<const PointId> members,
                            const GroundTruthRef& reference, std::size_t k, DistanceKind kind) {
    reference.validate();
    if (cloud.is_matrix()) {
        throw Error("certification requires coordinate-backed point sets");
    }
    if (cloud.dimension() != reference.points.dimension()) {
        throw Error("point set and reference have different dimensions");
    }
    std::vector<PointId> ids(members.begin(), members.end());
    if (ids.empty()) {
        ids.resize(cloud.size());
        std::iota(ids.begin(), ids.end(), PointId{0});
    }
    if (k == 0 || k > ids.size()) {
        throw Error("k = " + std::to_string(k) + " must lie in [1, " + std::to_string(ids.size()) + "]");
    }

    const Metric ref_metric{metric.kind, 1.0};
    const NeighborIndex sample_index(cloud, metric, default_strategy(cloud, metric), ids);
    const NeighborIndex ref_index(reference.points, ref_metric, SearchStrategy::spatial_tree);
    const auto& f = reference.feature_size;

    SamplingCertificate cert;
    cert.k = k;
    cert.kind = kind;
    cert.adaptive = f.has_value();

    const std::size_t m = reference.points.size();
    std::vector<double> coverage(m);
    parallel_for(m, [&](std::size_t i) {
        const double d = robust_distance_at(sample_index, reference.points.point(i), k, kind);
        coverage[i] = f ? d / (*f)[i] : d;
    });
    const auto cov_max = std::max_element(coverage.begin(), coverage.end());
    cert.coverage_term = *cov_max;
    cert.coverage_argmax = static_cast<PointId>(cov_max - coverage.begin());

    const std::size_t n = ids.size();
    std::vector<double> noise(n);
    std::vector<double> scaled(n);
    std::vector<char> tie(n, 0);
    parallel_for(n, [&](std::size_t i) {
        const auto p = cloud.point(ids[i]);
        const double d = robust_distance_at(sample_index, ids[i], k, kind);
        const auto nearest = ref_index.k_nearest(p, std::min<std::size_t>(2, m));
        if (nearest.size() == 2 && nearest[0].distance == nearest[1].distance) {
            tie[i] = 1;
        }
        const double scale = f ? (*f)[nearest[0].id] : 1.0;
        noise[i] = (nearest[0].distance - d) / scale;
        scaled[i] = d / scale;
    });
    const auto noise_max = std::max_element(noise.begin(), noise.end());
    cert.noise_term = *noise_max;
    cert.noise_argmax = ids[static_cast<std::size_t>(noise_max - noise.begin())];
    cert.min_robust_distance = *std::min_element(scaled.begin(), scaled.end());
    cert.nearest_reference_ties = static_cast<std::size_t>(std::count(tie.begin(), tie.end(), 1));

    cert.epsilon_k = std::max({0.0, cert.coverage_term, cert.noise_term});
    if (cert.min_robust_distance > 0) {
        cert.uniformity_c = cert.epsilon_k / cert.min_robust_distance;
        cert.weak_uniformity_c = cert.weak_epsilon() / cert.min_robust_distance;
    }
    return cert;
}

SamplingCertificate certify(const PointCloud& cloud, const Metric& metric, const GroundTruthRef& reference,
                            std::size_t k, DistanceKind kind) {
    return certify(cloud, metric, std::span<const PointId>{}, reference, k, kind);
}

double estimate_epsilon_k(const PointCloud& cloud, const Metric& metric, const GroundTruthRef& reference,
                          std::size_t k, DistanceKind kind) {
    GroundTruthRef plain{reference.points, std::nullopt};
    return certify(cloud, metric, plain, k, kind).epsilon_k;
}

std::optional<double> estimate_uniformity(const PointCloud& cloud, const Metric& metric, double epsilon_k,
                                          std::size_t k, DistanceKind kind) {
    if (!(epsilon_k > 0)) {
        throw Error("uniformity needs a positive epsilon");
    }
    const NeighborIndex index(cloud, metric, default_strategy(cloud, metric));
    const auto prof = profile(index, k, kind);
    const double lowest = *std::min_element(prof.values.begin(), prof.values.end());
    if (!(lowest > 0)) {
        return std::nullopt;
    }
    return epsilon_k / lowest;
}

double estimate_adaptive_epsilon(const PointCloud& cloud, const Metric& metric, const GroundTruthRef& reference,
                                 std::size_t k, DistanceKind kind) {
    if (!reference.feature_size) {
        throw Error("adaptive certification needs a feature size on the reference");
    }
    return certify(cloud, metric, reference, k, kind).epsilon_k;
}

FeatureSizeReport check_feature_size(const GroundTruthRef& reference, const Metric& metric, double tolerance,
                                     std::size_t max_pairs, std::uint64_t seed) {
    if (!reference.feature_size) {
        throw Error("reference has no feature size");
    }
    const auto& f = *reference.feature_size;
    const auto& pts = reference.points;
    if (f.size() != pts.size()) {
        throw Error("feature size count does not match the reference");
    }

    FeatureSizeReport report;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!(f[i] > 0)) {
            report.positive = false;
            report.nonpositive.push_back(i);
        }
    }

    auto check = [&](PointId a, PointId b) {
        ++report.pairs_checked;
        const double d = distance(metric.kind, pts.point(a), pts.point(b));
        const double gap = std::abs(f[a] - f[b]);
        if (gap > d + tolerance) {
            report.lipschitz = false;
            report.violations.push_back({a, b, gap, d});
        }
    };

    const std::size_t m = pts.size();
    const std::size_t all_pairs = m * (m - 1) / 2;
    if (all_pairs <= max_pairs) {
        for (PointId a = 0; a < m; ++a) {
            for (PointId b = a + 1; b < m; ++b) {
                check(a, b);
            }
        }
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<PointId> pick(0, m - 1);
        for (std::size_t s = 0; s < max_pairs; ++s) {
            const PointId a = pick(rng);
            const PointId b = pick(rng);
            if (a != b) {
                check(std::min(a, b), std::max(a, b));
            }
        }
    }
    return report;
}

}
