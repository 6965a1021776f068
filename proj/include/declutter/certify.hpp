#ifndef DECLUTTER_CERTIFY_HPP
#define DECLUTTER_CERTIFY_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "declutter/neighbors.hpp"
#include "declutter/robust_distance.hpp"

/**
 * @file certify.hpp
 *
 * @brief Tightest sampling parameters of a point set with respect to a ground-truth reference.
 *
 * A set P is an eps-noisy sample of K when
 *   (1) d_k(x) <= eps            for every x in K       (coverage), and
 *   (2) d(y, K) <= d_k(y) + eps  for every y            (noise),
 * and it is additionally (eps, c)-uniform when
 *   (3) d_k(p) >= eps / c        for every p in P.
 * Dropping (2) gives the weak-uniform condition. In the adaptive variants every
 * eps is multiplied by the feature size at the nearest reference point.
 *
 * K is represented by a finite reference K'. Condition (2) is evaluated over
 * P; K' itself contributes nothing to it since d(x, K') = 0 there.
 */

namespace declutter {

struct SamplingCertificate {
    std::size_t k = 0;
    DistanceKind kind = DistanceKind::rms;
    bool adaptive = false;

    /// Smallest eps satisfying conditions (1) and (2).
    double epsilon_k = 0;
    /// max over K' of d_k(x) (divided by f(x) when adaptive).
    double coverage_term = 0;
    /// max over P of d(p, K') - d_k(p) (divided by f(p̄) when adaptive); may be negative.
    double noise_term = 0;
    /// min over P of d_k(p) (divided by f(p̄) when adaptive).
    double min_robust_distance = 0;
    /// eps / min d_k(p); absent when some d_k(p) is zero.
    std::optional<double> uniformity_c;
    /// Same ratio with the coverage term only (weak uniformity).
    std::optional<double> weak_uniformity_c;

    PointId coverage_argmax = 0;
    PointId noise_argmax = 0;
    /// Points of P whose nearest reference point is not unique (lowest id used).
    std::size_t nearest_reference_ties = 0;

    /// Weak epsilon: the coverage term clamped at zero.
    double weak_epsilon() const;
    bool is_uniform(double c) const { return uniformity_c && *uniformity_c <= c; }
    bool is_weak_uniform(double c) const { return weak_uniformity_c && *weak_uniformity_c <= c; }
};

/**
 * Certifies `members` of `cloud` (all points when `members` is empty) against the
 * reference. The certificate is adaptive iff the reference has a feature size.
 */
SamplingCertificate certify(const PointCloud& cloud, const Metric& metric, std::span<const PointId> members,
                            const GroundTruthRef& reference, std::size_t k, DistanceKind kind);

SamplingCertificate certify(const PointCloud& cloud, const Metric& metric, const GroundTruthRef& reference,
                            std::size_t k, DistanceKind kind = DistanceKind::rms);

/**
 * Non-adaptive tightest eps, ignoring any feature size on the reference.
 */
double estimate_epsilon_k(const PointCloud& cloud, const Metric& metric, const GroundTruthRef& reference,
                          std::size_t k, DistanceKind kind = DistanceKind::rms);

/**
 * eps / min_p d_k(p); empty when the minimum is zero.
 */
std::optional<double> estimate_uniformity(const PointCloud& cloud, const Metric& metric, double epsilon_k,
                                          std::size_t k, DistanceKind kind = DistanceKind::rms);

/**
 * Adaptive tightest eps; the reference must carry a positive feature size.
 */
double estimate_adaptive_epsilon(const PointCloud& cloud, const Metric& metric, const GroundTruthRef& reference,
                                 std::size_t k, DistanceKind kind = DistanceKind::rms);

struct FeatureSizeViolation {
    PointId a;
    PointId b;
    double value_gap;
    double distance;
};

struct FeatureSizeReport {
    bool positive = true;
    bool lipschitz = true;
    std::size_t pairs_checked = 0;
    std::vector<PointId> nonpositive;
    std::vector<FeatureSizeViolation> violations;

    bool pass() const { return positive && lipschitz; }
};

/**
 * Checks that f is positive and 1-Lipschitz on the reference. All pairs are
 * examined up to `max_pairs`; beyond that a seeded random subset is used.
 */
FeatureSizeReport check_feature_size(const GroundTruthRef& reference, const Metric& metric, double tolerance,
                                     std::size_t max_pairs = 5'000'000, std::uint64_t seed = 0);

}

#endif
