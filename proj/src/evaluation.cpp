#include "declutter/evaluation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "declutter/parallel.hpp"

namespace declutter {

namespace {

double directed(const NeighborIndex& target, std::size_t count, const auto& query_of) {
    std::vector<double> d(count);
    parallel_for(count, [&](std::size_t i) { d[i] = target.nearest(query_of(i)).distance; });
    return count == 0 ? 0.0 : *std::max_element(d.begin(), d.end());
}

std::vector<PointId> all_ids(std::size_t n) {
    std::vector<PointId> ids(n);
    std::iota(ids.begin(), ids.end(), PointId{0});
    return ids;
}

void require_nonempty(std::size_t a, std::size_t b) {
    if (a == 0 || b == 0) {
        throw Error("Hausdorff distance of an empty set is undefined");
    }
}

BoundCertificate not_applicable(BoundName name, std::string why) {
    BoundCertificate c;
    c.name = name;
    c.status = BoundStatus::not_applicable;
    c.note = std::move(why);
    return c;
}

void decide(BoundCertificate& c) {
    c.status = c.lhs <= c.rhs + bound_tolerance ? BoundStatus::pass : BoundStatus::fail;
}

bool is_theoretical_constant(double c) {
    return std::abs(c - theoretical_resampling_constant) <= 1e-12;
}

bool exact_metric(const BoundInputs& in) {
    return in.metric.triangle_constant == 1.0 && in.lipschitz_constant == 1.0;
}

/// Common gate for the declutter-output bounds.
std::optional<std::string> declutter_gate(const BoundInputs& in, bool need_adaptive) {
    if (!in.cloud || !in.reference || !in.certificate || !in.declutter) {
        return "needs cloud, reference, certificate and declutter result";
    }
    if (in.certificate->k != in.declutter->k || in.certificate->kind != in.declutter->profile.kind) {
        return "certificate parameters do not match the declutter run";
    }
    if (in.certificate->adaptive != need_adaptive) {
        return need_adaptive ? "needs an adaptive certificate" : "needs a non-adaptive certificate";
    }
    if (in.declutter->vicinity_factor != 2.0) {
        return "guarantee only holds for vicinity factor 2";
    }
    if (!exact_metric(in)) {
        return "guarantee needs an exact metric and a 1-Lipschitz robust distance";
    }
    if (in.declutter->profile.size() != in.cloud->size()) {
        return "certificate covers the full cloud but declutter ran on a subset";
    }
    return std::nullopt;
}

BoundCertificate linear_bound(BoundName name, double lhs, double epsilon, double factor) {
    BoundCertificate c;
    c.name = name;
    c.lhs = lhs;
    c.parameters = {{"epsilon", epsilon}, {"factor", factor}};
    c.rhs = factor * epsilon;
    decide(c);
    return c;
}

BoundCertificate check_declutter(BoundName name, const BoundInputs& in) {
    const bool adaptive = name == BoundName::declutter_adaptive_hausdorff;
    if (auto why = declutter_gate(in, adaptive)) {
        return not_applicable(name, *why);
    }
    const double eps = in.certificate->epsilon_k;
    const auto& kept = in.declutter->kept;
    switch (name) {
    case BoundName::declutter_hausdorff: {
        const auto parts = hausdorff_to_reference(*in.cloud, in.metric, kept, in.reference->points);
        return linear_bound(name, parts.value(), eps, 7.0);
    }
    case BoundName::declutter_coverage: {
        const auto parts = hausdorff_to_reference(*in.cloud, in.metric, kept, in.reference->points);
        return linear_bound(name, parts.backward, eps, 5.0);
    }
    case BoundName::declutter_outlier_removal: {
        const auto parts = hausdorff_to_reference(*in.cloud, in.metric, kept, in.reference->points);
        return linear_bound(name, parts.forward, eps, 7.0);
    }
    case BoundName::declutter_adaptive_hausdorff: {
        const auto parts = adaptive_hausdorff(*in.cloud, in.metric, kept, *in.reference);
        return linear_bound(name, parts.value(), eps, 7.0);
    }
    case BoundName::declutter_separation: {
        if (!in.certificate->uniformity_c) {
            return not_applicable(name, "uniformity constant is undefined (zero robust distance)");
        }
        const double c_uniform = *in.certificate->uniformity_c;
        BoundCertificate c;
        c.name = name;
        c.parameters = {{"epsilon", eps}, {"uniformity_c", c_uniform}};
        c.lhs = 2.0 * eps / c_uniform;
        if (kept.size() < 2) {
            c.rhs = c.lhs;
            c.note = "fewer than two kept points";
        } else {
            const NeighborIndex index(*in.cloud, in.metric, default_strategy(*in.cloud, in.metric), kept);
            std::vector<double> gaps(kept.size());
            parallel_for(kept.size(), [&](std::size_t i) { gaps[i] = index.k_nearest(kept[i], 2)[1].distance; });
            c.rhs = *std::min_element(gaps.begin(), gaps.end());
        }
        decide(c);
        return c;
    }
    default:
        break;
    }
    return not_applicable(name, "not a declutter bound");
}

BoundCertificate check_tail(const BoundInputs& in) {
    const BoundName name = BoundName::knn_tail;
    if (!in.cloud || in.tail_k == 0) {
        return not_applicable(name, "needs a cloud and k");
    }
    if (in.metric.triangle_constant != 1.0) {
        return not_applicable(name, "needs an exact metric");
    }
    const std::vector<PointId> points = in.tail_points.empty() ? all_ids(in.cloud->size()) : in.tail_points;
    const NeighborIndex index(*in.cloud, in.metric, default_strategy(*in.cloud, in.metric));
    const std::size_t k = in.tail_k;
    std::vector<double> worst(points.size());
    parallel_for(points.size(), [&](std::size_t j) {
        const auto nn = index.k_nearest(points[j], k);
        const double d = reduce_neighbors(nn, DistanceKind::rms);
        double w = -INFINITY;
        for (std::size_t i = 1; i <= k; ++i) {
            const double factor = std::sqrt(static_cast<double>(k) / static_cast<double>(k - i + 1));
            w = std::max(w, nn[i - 1].distance - factor * d);
        }
        worst[j] = w;
    });
    BoundCertificate c;
    c.name = name;
    c.parameters = {{"k", static_cast<double>(k)}, {"points", static_cast<double>(points.size())}};
    c.lhs = *std::max_element(worst.begin(), worst.end());
    c.rhs = 0.0;
    decide(c);
    return c;
}

BoundCertificate check_resample_step(const BoundInputs& in) {
    const BoundName name = BoundName::resample_step_hausdorff;
    if (auto why = declutter_gate(in, false)) {
        return not_applicable(name, *why);
    }
    if (!in.resampled) {
        return not_applicable(name, "needs the resampled set");
    }
    if (!is_theoretical_constant(in.resampling_constant)) {
        return not_applicable(name, "guarantee is only asserted at the theoretical resampling constant");
    }
    if (!in.certificate->is_uniform(2.0)) {
        return not_applicable(name, "input is not certified (eps, 2)-uniform");
    }
    const double eps = in.certificate->epsilon_k;
    const double big_c = in.resampling_constant;
    BoundCertificate c;
    c.name = name;
    c.parameters = {{"epsilon", eps}, {"resampling_constant", big_c}};
    c.lhs = hausdorff_to_reference(*in.cloud, in.metric, *in.resampled, in.reference->points).value();
    c.rhs = (8.0 * big_c + 7.0) * eps;
    decide(c);
    return c;
}

BoundCertificate check_parfree_hausdorff(const BoundInputs& in) {
    const BoundName name = BoundName::parfree_hausdorff;
    if (!in.cloud || !in.reference || !in.parfree) {
        return not_applicable(name, "needs cloud, reference and parameter-free result");
    }
    if (!is_theoretical_constant(in.parfree->trace.resampling_constant)) {
        return not_applicable(name, "guarantee is only asserted at the theoretical resampling constant");
    }
    if (in.parfree->trace.kind != DistanceKind::rms || !exact_metric(in)) {
        return not_applicable(name, "guarantee needs the rms k-distance under an exact metric");
    }
    if (!in.base_level) {
        return not_applicable(name, "no base level given");
    }
    const auto levels = valid_base_levels(in.scale_certificates, in.cloud->size());
    if (std::find(levels.begin(), levels.end(), *in.base_level) == levels.end()) {
        return not_applicable(name, "scale certificates do not establish the hypotheses at the base level");
    }
    double eps = 0;
    for (const auto& cert : in.scale_certificates) {
        if (cert.k == (std::size_t{1} << *in.base_level)) {
            eps = cert.epsilon_k;
        }
    }
    auto c = linear_bound(name,
                          hausdorff_to_reference(*in.cloud, in.metric, in.parfree->output, in.reference->points).value(),
                          eps, parfree_hausdorff_constant());
    c.parameters["base_level"] = *in.base_level;
    return c;
}

BoundCertificate check_conservation(const BoundInputs& in) {
    const BoundName name = BoundName::parfree_conservation;
    if (!in.cloud || !in.parfree) {
        return not_applicable(name, "needs cloud and parameter-free result");
    }
    const auto& trace = in.parfree->trace;
    if (!is_theoretical_constant(trace.resampling_constant)) {
        return not_applicable(name, "guarantee is only asserted at the theoretical resampling constant");
    }
    if (trace.kind != DistanceKind::rms || in.metric.triangle_constant != 1.0) {
        return not_applicable(name, "guarantee needs the rms k-distance under an exact metric");
    }
    BoundCertificate c;
    c.name = name;
    c.parameters = {{"kappa", conservation_constant()}};
    c.rhs = 0.0;
    c.lhs = -INFINITY;
    if (trace.iterations.empty()) {
        c.lhs = 0.0;
        c.note = "degenerate run";
        decide(c);
        return c;
    }
    const NeighborIndex output(*in.cloud, in.metric, default_strategy(*in.cloud, in.metric), in.parfree->output);
    const double kappa = conservation_constant();
    for (const auto& step : trace.iterations) {
        const auto& prof = step.decluttered.profile;
        std::vector<double> excess(prof.size());
        parallel_for(prof.size(), [&](std::size_t i) {
            excess[i] = output.nearest(prof.ids[i]).distance - kappa * prof.values[i];
        });
        c.lhs = std::max(c.lhs, *std::max_element(excess.begin(), excess.end()));
    }
    decide(c);
    return c;
}

BoundCertificate check_relaxed(const BoundInputs& in) {
    const BoundName name = BoundName::relaxed_declutter_hausdorff;
    if (!in.cloud || !in.reference || !in.certificate || !in.declutter) {
        return not_applicable(name, "needs cloud, reference, certificate and declutter result");
    }
    if (in.triangle_constant >= 2.0) {
        return not_applicable(name, "relaxed bound is undefined for triangle constant >= 2");
    }
    if (in.certificate->k != in.declutter->k || in.certificate->adaptive || in.declutter->vicinity_factor != 2.0) {
        return not_applicable(name, "certificate does not match the declutter run");
    }
    const double eps = in.certificate->epsilon_k;
    BoundCertificate c;
    c.name = name;
    c.parameters = {{"epsilon", eps},
                    {"triangle_constant", in.triangle_constant},
                    {"lipschitz_constant", in.lipschitz_constant}};
    c.lhs = hausdorff_to_reference(*in.cloud, in.metric, in.declutter->kept, in.reference->points).value();
    c.rhs = relaxed_bound(in.triangle_constant, in.lipschitz_constant) * eps;
    decide(c);
    return c;
}

}

HausdorffParts hausdorff_parts(const PointCloud& a, const PointCloud& b, MetricKind kind) {
    require_nonempty(a.size(), b.size());
    const Metric metric{kind, 1.0};
    const NeighborIndex index_a(a, metric, SearchStrategy::spatial_tree);
    const NeighborIndex index_b(b, metric, SearchStrategy::spatial_tree);
    HausdorffParts parts;
    parts.forward = directed(index_b, a.size(), [&](std::size_t i) { return a.point(i); });
    parts.backward = directed(index_a, b.size(), [&](std::size_t i) { return b.point(i); });
    return parts;
}

double hausdorff(const PointCloud& a, const PointCloud& b, MetricKind kind) {
    return hausdorff_parts(a, b, kind).value();
}

double hausdorff(const PointCloud& cloud, const Metric& metric, std::span<const PointId> a,
                 std::span<const PointId> b) {
    require_nonempty(a.size(), b.size());
    const auto strategy = default_strategy(cloud, metric);
    const NeighborIndex index_a(cloud, metric, strategy, {a.begin(), a.end()});
    const NeighborIndex index_b(cloud, metric, strategy, {b.begin(), b.end()});
    const double forward = directed(index_b, a.size(), [&](std::size_t i) { return a[i]; });
    const double backward = directed(index_a, b.size(), [&](std::size_t i) { return b[i]; });
    return std::max(forward, backward);
}

HausdorffParts hausdorff_to_reference(const PointCloud& cloud, const Metric& metric, std::span<const PointId> ids,
                                      const PointCloud& reference) {
    require_nonempty(ids.size(), reference.size());
    const Metric ref_metric{metric.kind, 1.0};
    const NeighborIndex subset(cloud, metric, default_strategy(cloud, metric), {ids.begin(), ids.end()});
    const NeighborIndex ref(reference, ref_metric, SearchStrategy::spatial_tree);
    HausdorffParts parts;
    parts.forward = directed(ref, ids.size(), [&](std::size_t i) { return cloud.point(ids[i]); });
    parts.backward = directed(subset, reference.size(), [&](std::size_t i) { return reference.point(i); });
    return parts;
}

HausdorffParts adaptive_hausdorff(const PointCloud& cloud, const Metric& metric, std::span<const PointId> ids,
                                  const GroundTruthRef& reference) {
    reference.validate();
    if (!reference.feature_size) {
        throw Error("adaptive Hausdorff distance needs a feature size");
    }
    require_nonempty(ids.size(), reference.points.size());
    const auto& f = *reference.feature_size;
    const Metric ref_metric{metric.kind, 1.0};
    const NeighborIndex subset(cloud, metric, default_strategy(cloud, metric), {ids.begin(), ids.end()});
    const NeighborIndex ref(reference.points, ref_metric, SearchStrategy::spatial_tree);

    std::vector<double> forward(ids.size());
    parallel_for(ids.size(), [&](std::size_t i) {
        const auto nearest = ref.nearest(cloud.point(ids[i]));
        forward[i] = nearest.distance / f[nearest.id];
    });
    std::vector<double> backward(reference.points.size());
    parallel_for(backward.size(), [&](std::size_t i) {
        backward[i] = subset.nearest(reference.points.point(i)).distance / f[i];
    });
    return {*std::max_element(forward.begin(), forward.end()), *std::max_element(backward.begin(), backward.end())};
}

double relaxed_bound(double triangle_constant, double lipschitz_constant) {
    const double cx = triangle_constant;
    const double cl = lipschitz_constant;
    if (!(cx >= 1.0) || !(cl >= 1.0)) {
        throw Error("relaxation constants must be at least 1");
    }
    if (!(cx < 2.0)) {
        throw Error("relaxed bound is undefined for triangle constant >= 2");
    }
    const double first = cl + cx * cl + 4.0 * cx * cl * cl + 1.0;
    const double second = (2.0 + cx * cx + 4.0 * cx * cx * cl) / (2.0 - cx);
    return std::max(first, second);
}

std::string to_string(BoundName name) {
    switch (name) {
    case BoundName::declutter_hausdorff:
        return "declutter_hausdorff";
    case BoundName::declutter_coverage:
        return "declutter_coverage";
    case BoundName::declutter_outlier_removal:
        return "declutter_outlier_removal";
    case BoundName::declutter_separation:
        return "declutter_separation";
    case BoundName::declutter_adaptive_hausdorff:
        return "declutter_adaptive_hausdorff";
    case BoundName::knn_tail:
        return "knn_tail";
    case BoundName::resample_step_hausdorff:
        return "resample_step_hausdorff";
    case BoundName::parfree_hausdorff:
        return "parfree_hausdorff";
    case BoundName::parfree_conservation:
        return "parfree_conservation";
    case BoundName::relaxed_declutter_hausdorff:
        return "relaxed_declutter_hausdorff";
    }
    return "unknown";
}

std::vector<BoundName> all_bound_names() {
    return {BoundName::declutter_hausdorff,     BoundName::declutter_coverage,
            BoundName::declutter_outlier_removal, BoundName::declutter_separation,
            BoundName::declutter_adaptive_hausdorff, BoundName::knn_tail,
            BoundName::resample_step_hausdorff, BoundName::parfree_hausdorff,
            BoundName::parfree_conservation,    BoundName::relaxed_declutter_hausdorff};
}

BoundName bound_name_from_string(const std::string& name) {
    for (auto b : all_bound_names()) {
        if (to_string(b) == name) {
            return b;
        }
    }
    throw Error("unknown bound '" + name + "'");
}

std::string to_string(BoundStatus status) {
    switch (status) {
    case BoundStatus::pass:
        return "pass";
    case BoundStatus::fail:
        return "fail";
    case BoundStatus::not_applicable:
        return "n/a";
    }
    return "unknown";
}

BoundCertificate verify_bound(BoundName name, const BoundInputs& inputs) {
    switch (name) {
    case BoundName::declutter_hausdorff:
    case BoundName::declutter_coverage:
    case BoundName::declutter_outlier_removal:
    case BoundName::declutter_separation:
    case BoundName::declutter_adaptive_hausdorff:
        return check_declutter(name, inputs);
    case BoundName::knn_tail:
        return check_tail(inputs);
    case BoundName::resample_step_hausdorff:
        return check_resample_step(inputs);
    case BoundName::parfree_hausdorff:
        return check_parfree_hausdorff(inputs);
    case BoundName::parfree_conservation:
        return check_conservation(inputs);
    case BoundName::relaxed_declutter_hausdorff:
        return check_relaxed(inputs);
    }
    throw Error("unknown bound");
}

double rederive_bound_side(const BoundCertificate& c) {
    const auto get = [&](const char* key) {
        auto it = c.parameters.find(key);
        if (it == c.parameters.end()) {
            throw Error(std::string("certificate lacks parameter '") + key + "'");
        }
        return it->second;
    };
    switch (c.name) {
    case BoundName::declutter_separation:
        return 2.0 * get("epsilon") / get("uniformity_c");
    case BoundName::knn_tail:
    case BoundName::parfree_conservation:
        return 0.0;
    case BoundName::resample_step_hausdorff:
        return (8.0 * get("resampling_constant") + 7.0) * get("epsilon");
    case BoundName::relaxed_declutter_hausdorff:
        return relaxed_bound(get("triangle_constant"), get("lipschitz_constant")) * get("epsilon");
    default:
        return get("factor") * get("epsilon");
    }
}

double conservation_constant() {
    return (18.0 + 17.0 * std::sqrt(2.0)) / 4.0;
}

double parfree_hausdorff_constant() {
    return 87.0 + 16.0 * std::sqrt(2.0);
}

std::vector<int> valid_base_levels(const std::vector<SamplingCertificate>& scale_certificates, std::size_t n) {
    const int top = initial_level(n);
    std::vector<const SamplingCertificate*> by_level(static_cast<std::size_t>(top) + 1, nullptr);
    for (const auto& cert : scale_certificates) {
        for (int level = 1; level <= top; ++level) {
            if (cert.k == (std::size_t{1} << level) && !cert.adaptive && cert.kind == DistanceKind::rms) {
                by_level[static_cast<std::size_t>(level)] = &cert;
            }
        }
    }
    std::vector<int> valid;
    // Walk down from the top while every level stays weak-uniform.
    for (int level = top; level >= 1; --level) {
        const auto* cert = by_level[static_cast<std::size_t>(level)];
        if (!cert) {
            break;
        }
        if (cert->is_uniform(2.0)) {
            valid.push_back(level);
        }
        if (!cert->is_weak_uniform(2.0)) {
            break;
        }
    }
    return valid;
}

}
