#ifndef DECLUTTER_EVALUATION_HPP
#define DECLUTTER_EVALUATION_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "declutter/certify.hpp"
#include "declutter/declutter.hpp"
#include "declutter/parfree.hpp"

/**
 * @file evaluation.hpp
 *
 * @brief Hausdorff distances and executable checks of the denoising guarantees.
 */

namespace declutter {

/// Absolute slack allowed on every inequality check.
inline constexpr double bound_tolerance = 1e-9;

struct HausdorffParts {
    /// max over the first set of the distance to the second.
    double forward = 0;
    /// max over the second set of the distance to the first.
    double backward = 0;

    double value() const { return forward > backward ? forward : backward; }
};

HausdorffParts hausdorff_parts(const PointCloud& a, const PointCloud& b, MetricKind kind = MetricKind::euclidean);
double hausdorff(const PointCloud& a, const PointCloud& b, MetricKind kind = MetricKind::euclidean);

/**
 * Between two subsets of one cloud (works for distance matrices too).
 */
double hausdorff(const PointCloud& cloud, const Metric& metric, std::span<const PointId> a,
                 std::span<const PointId> b);

/**
 * Between a subset of a coordinate cloud and a reference set; `forward` is the subset side.
 */
HausdorffParts hausdorff_to_reference(const PointCloud& cloud, const Metric& metric, std::span<const PointId> ids,
                                      const PointCloud& reference);

/**
 * Adaptive Hausdorff distance: the smallest delta with d(p, K') <= delta f(p̄)
 * for p in the subset and d(x, subset) <= delta f(x) for x in K'.
 */
HausdorffParts adaptive_hausdorff(const PointCloud& cloud, const Metric& metric, std::span<const PointId> ids,
                                  const GroundTruthRef& reference);

/**
 * Constant m such that the declutter output is within m eps of the ground truth
 * when the triangle inequality holds up to `triangle_constant` and the robust
 * distance is Lipschitz up to `lipschitz_constant`. Requires triangle_constant < 2.
 */
double relaxed_bound(double triangle_constant, double lipschitz_constant);

enum class BoundName {
    declutter_hausdorff,
    declutter_coverage,
    declutter_outlier_removal,
    declutter_separation,
    declutter_adaptive_hausdorff,
    knn_tail,
    resample_step_hausdorff,
    parfree_hausdorff,
    parfree_conservation,
    relaxed_declutter_hausdorff,
};

std::string to_string(BoundName name);
BoundName bound_name_from_string(const std::string& name);
std::vector<BoundName> all_bound_names();

enum class BoundStatus { pass, fail, not_applicable };

std::string to_string(BoundStatus status);

struct BoundCertificate {
    BoundName name;
    BoundStatus status = BoundStatus::not_applicable;
    double lhs = 0;
    double rhs = 0;
    /// Scalar inputs that determine `rhs` (and the hypotheses checked).
    std::map<std::string, double> parameters;
    std::string note;

    bool applicable() const { return status != BoundStatus::not_applicable; }
    /// The side holding the theoretical bound; the separation check is a lower bound, so it sits on the left.
    double bound_side() const { return name == BoundName::declutter_separation ? lhs : rhs; }
};

/**
 * Everything a bound check may need; each bound reads the subset it uses and
 * reports not-applicable when a required input or hypothesis is missing.
 */
struct BoundInputs {
    const PointCloud* cloud = nullptr;
    Metric metric;
    const GroundTruthRef* reference = nullptr;

    /// Certificate for the declutter run (its k and kind must match).
    const SamplingCertificate* certificate = nullptr;
    const DeclutterResult* declutter = nullptr;
    /// Output of one resampling step after `declutter` (single-step bound).
    const std::vector<PointId>* resampled = nullptr;
    double resampling_constant = theoretical_resampling_constant;

    const ParfreeResult* parfree = nullptr;
    /// Certificates of the full input at k = 2^level for level = base_level .. top.
    std::vector<SamplingCertificate> scale_certificates;
    std::optional<int> base_level;

    /// Points at which the neighbor tail inequality is checked (all cloud points when empty).
    std::vector<PointId> tail_points;
    std::size_t tail_k = 0;

    double triangle_constant = 1.0;
    double lipschitz_constant = 1.0;
};

BoundCertificate verify_bound(BoundName name, const BoundInputs& inputs);

/**
 * Recomputes the theoretical side of the inequality from the stored
 * parameters: `rhs` for upper bounds, `lhs` for the separation bound.
 */
double rederive_bound_side(const BoundCertificate& certificate);

/**
 * (18 + 17 sqrt 2) / 4.
 */
double conservation_constant();

/**
 * 87 + 16 sqrt 2.
 */
double parfree_hausdorff_constant();

/**
 * Levels i0 for which the scale certificates establish the hypotheses of the
 * parameter-free guarantee: weak (eps, 2)-uniform at every level above i0 and
 * (eps, 2)-uniform at i0. Certificates must have k = 2^level and reach the
 * top level floor(log2 n).
 */
std::vector<int> valid_base_levels(const std::vector<SamplingCertificate>& scale_certificates, std::size_t n);

}

#endif
