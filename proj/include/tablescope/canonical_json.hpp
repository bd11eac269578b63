#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

namespace tablescope {

using json = nlohmann::json;

/// Serializes `value` in canonical form: compact, object keys in byte order,
/// integral doubles without a fractional part, other doubles in their
/// shortest round-trip representation. No trailing newline.
/// Throws std::invalid_argument on NaN or infinity.
std::string canonical_dump(const json& value);

/// Shortest representation of `x` that parses back to the same double.
std::string format_number(double x);

/// Parses UTF-8 JSON text; malformed input raises SchemaError.
json parse_json(std::string_view raw, std::string_view what = "input");

}  // namespace tablescope
