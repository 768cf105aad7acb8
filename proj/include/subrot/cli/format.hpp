#pragma once

#include <json.hpp>
#include <optional>
#include <string>

namespace subrot::cli {

using Json = nlohmann::ordered_json;

/// "%.17g"; non-finite values become "nan" / "inf" / "-inf".
std::string format_number(double x);
std::string format_optional(const std::optional<double>& x);

/// Pretty-prints `doc` with two-space indentation and every floating-point
/// value at 17 significant digits (non-finite floats are written as null).
std::string dump_json(const Json& doc);

}  // namespace subrot::cli
