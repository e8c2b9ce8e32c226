#pragma once

#include <string>

#include <json.hpp>

#include "qeffects/channel.hpp"
#include "qeffects/effects.hpp"
#include "qeffects/fixedpoint.hpp"
#include "qeffects/funcalc.hpp"
#include "qeffects/harness.hpp"

namespace qeffects {

using Json = nlohmann::json;

inline constexpr const char* kReportSchema = "qeffects/1";

/// {"rows", "cols", "data": [[re, im], ...]} in row-major order.
Json matrix_to_json(const Matrix& m);
/// Throws ParseError on any structural problem or non-finite entry.
Matrix matrix_from_json(const Json& j);

/// {"dim", "kraus": [matrix, ...]}
Json channel_to_json(const KrausFamily& family);
/// Parses and validates; ParseError for shape problems, InvalidFamily et al.
/// from validation.
KrausFamily channel_from_json(const Json& j, const Tolerance& tol = {});

/// {"family": "power", "t": 0.5} and the like.
Json function_to_json(const FunctionSpec& h);
FunctionSpec function_from_json(const Json& j);

Json tolerance_to_json(const Tolerance& tol);
Json config_to_json(const TrialConfig& config);
Json channel_class_to_json(const ChannelClass& c);
Json containment_to_json(const ContainmentReport& r);
Json sharpness_to_json(const SharpnessReport& r);

/// Versioned report. `include_timing` = false drops elapsed_ms fields.
Json report_to_json(const SuiteReport& report, bool include_timing = true);

/// Reads and parses a file; ParseError when unreadable or malformed.
Json read_json_file(const std::string& path);

}  // namespace qeffects
