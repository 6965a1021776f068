#ifndef DECLUTTER_REPORT_HPP
#define DECLUTTER_REPORT_HPP

#include <string>

#include <json.hpp>

#include "declutter/certify.hpp"
#include "declutter/declutter.hpp"
#include "declutter/evaluation.hpp"
#include "declutter/parfree.hpp"
#include "declutter/synthgen.hpp"

/**
 * @file report.hpp
 *
 * @brief JSON serialization of results, traces and certificates.
 */

namespace declutter {

inline constexpr const char* report_schema = "declutter-report/1";
inline constexpr const char* library_version = "1.0.0";

nlohmann::json to_json(const DeclutterResult& result, bool include_profile = true);

/**
 * Per-iteration summary; point ids per iteration are only included when `include_ids` is set.
 */
nlohmann::json to_json(const ParfreeTrace& trace, bool include_ids = false);

nlohmann::json to_json(const SamplingCertificate& certificate);
SamplingCertificate certificate_from_json(const nlohmann::json& j);

nlohmann::json to_json(const BoundCertificate& certificate);
BoundCertificate bound_certificate_from_json(const nlohmann::json& j);

nlohmann::json to_json(const synth::ShapeSpec& shape);
nlohmann::json to_json(const synth::GeneratorConfig& config);

void write_json_file(const std::string& path, const nlohmann::json& j);

}

#endif
