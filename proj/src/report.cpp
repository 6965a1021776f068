#include "declutter/report.hpp"

#include <fstream>

namespace declutter {

using nlohmann::json;

json to_json(const DeclutterResult& result, bool include_profile) {
    json rejected = json::array();
    for (const auto& r : result.rejected) {
        rejected.push_back({{"id", r.id}, {"witness", r.witness}, {"distance", r.distance}, {"radius", r.radius}});
    }
    json j = {
        {"k", result.k},
        {"kind", to_string(result.profile.kind)},
        {"vicinity_factor", result.vicinity_factor},
        {"input_size", result.order.size()},
        {"kept_count", result.kept.size()},
        {"order", result.order},
        {"kept", result.kept},
        {"rejected", rejected},
    };
    if (include_profile) {
        j["profile"] = {{"ids", result.profile.ids}, {"values", result.profile.values}};
    }
    return j;
}

json to_json(const ParfreeTrace& trace, bool include_ids) {
    json iterations = json::array();
    for (const auto& step : trace.iterations) {
        json it = {
            {"level", step.level},
            {"k", step.k},
            {"input_size", step.input.size()},
            {"kept_size", step.decluttered.kept.size()},
            {"resampled_size", step.resampled.size()},
        };
        if (include_ids) {
            it["input"] = step.input;
            it["kept"] = step.decluttered.kept;
            it["resampled"] = step.resampled;
        }
        iterations.push_back(std::move(it));
    }
    return {
        {"resampling_constant", trace.resampling_constant},
        {"kind", to_string(trace.kind)},
        {"degenerate", trace.degenerate},
        {"iterations", iterations},
    };
}

json to_json(const SamplingCertificate& c) {
    json j = {
        {"k", c.k},
        {"kind", to_string(c.kind)},
        {"adaptive", c.adaptive},
        {"epsilon_k", c.epsilon_k},
        {"weak_epsilon_k", c.weak_epsilon()},
        {"coverage_term", c.coverage_term},
        {"noise_term", c.noise_term},
        {"min_robust_distance", c.min_robust_distance},
        {"uniformity_c", c.uniformity_c ? json(*c.uniformity_c) : json(nullptr)},
        {"weak_uniformity_c", c.weak_uniformity_c ? json(*c.weak_uniformity_c) : json(nullptr)},
        {"uniform_c2", c.is_uniform(2.0)},
        {"weak_uniform_c2", c.is_weak_uniform(2.0)},
        {"coverage_argmax", c.coverage_argmax},
        {"noise_argmax", c.noise_argmax},
        {"nearest_reference_ties", c.nearest_reference_ties},
    };
    return j;
}

SamplingCertificate certificate_from_json(const json& j) {
    SamplingCertificate c;
    c.k = j.at("k").get<std::size_t>();
    c.kind = distance_kind_from_string(j.at("kind").get<std::string>());
    c.adaptive = j.at("adaptive").get<bool>();
    c.epsilon_k = j.at("epsilon_k").get<double>();
    c.coverage_term = j.at("coverage_term").get<double>();
    c.noise_term = j.at("noise_term").get<double>();
    c.min_robust_distance = j.at("min_robust_distance").get<double>();
    if (!j.at("uniformity_c").is_null()) {
        c.uniformity_c = j.at("uniformity_c").get<double>();
    }
    if (!j.at("weak_uniformity_c").is_null()) {
        c.weak_uniformity_c = j.at("weak_uniformity_c").get<double>();
    }
    c.coverage_argmax = j.at("coverage_argmax").get<PointId>();
    c.noise_argmax = j.at("noise_argmax").get<PointId>();
    c.nearest_reference_ties = j.at("nearest_reference_ties").get<std::size_t>();
    return c;
}

json to_json(const BoundCertificate& c) {
    json j = {
        {"bound", to_string(c.name)},
        {"status", to_string(c.status)},
        {"parameters", c.parameters},
        {"note", c.note},
    };
    if (c.applicable()) {
        j["lhs"] = c.lhs;
        j["rhs"] = c.rhs;
    }
    return j;
}

BoundCertificate bound_certificate_from_json(const json& j) {
    BoundCertificate c;
    c.name = bound_name_from_string(j.at("bound").get<std::string>());
    const auto status = j.at("status").get<std::string>();
    c.status = status == "pass" ? BoundStatus::pass : status == "fail" ? BoundStatus::fail : BoundStatus::not_applicable;
    c.parameters = j.at("parameters").get<std::map<std::string, double>>();
    c.note = j.at("note").get<std::string>();
    if (j.contains("lhs")) {
        c.lhs = j.at("lhs").get<double>();
        c.rhs = j.at("rhs").get<double>();
    }
    return c;
}

json to_json(const synth::ShapeSpec& shape) {
    json j = {{"kind", synth::shape_name(shape)}};
    if (const auto* c = std::get_if<synth::Circle>(&shape)) {
        j["center"] = c->center;
        j["radius"] = c->radius;
    } else if (const auto* p = std::get_if<synth::Polyline>(&shape)) {
        j["vertices"] = p->vertices;
        j["closed"] = p->closed;
    } else if (const auto* l = std::get_if<synth::TwoScaleLoops>(&shape)) {
        j["big_radius"] = l->big_radius;
        j["loop_radius"] = l->loop_radius;
        j["loop_count"] = l->loop_count;
    } else if (const auto* t = std::get_if<synth::Torus>(&shape)) {
        j["major_radius"] = t->major_radius;
        j["minor_radius"] = t->minor_radius;
    }
    return j;
}

json to_json(const synth::GeneratorConfig& config) {
    json j = {
        {"shape", to_json(config.shape)},
        {"count", config.count},
        {"mode", synth::to_string(config.mode)},
        {"sigma", config.sigma},
        {"ambient_count", config.ambient_count},
        {"ambient_margin", config.ambient_margin},
        {"seed", config.seed},
        {"reference_factor", config.reference_factor},
    };
    if (config.feature) {
        j["feature"] = {{"anchor", config.feature->anchor}, {"floor", config.feature->floor}};
    }
    if (config.ambient_box) {
        j["ambient_box"] = {{"lo", config.ambient_box->lo}, {"hi", config.ambient_box->hi}};
    }
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open '" + path + "' for writing");
    }
    out << j.dump(2) << '\n';
}

}
