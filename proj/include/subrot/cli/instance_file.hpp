#pragma once

#include <optional>
#include <string>
#include <utility>

#include "subrot/operator_model.hpp"

namespace subrot::cli {

/// One instance per document:
///
///   {
///     "label": "example",
///     "layout": "central" | "case2",
///     "a_plus":  [[...], ...],
///     "a_minus": [[...], ...],
///     "w":       [[...], ...],
///     "gap_hint": [alpha, beta]      (optional)
///   }
struct InstanceFile {
  BlockOperatorSpec spec;
  Layout layout = Layout::Central;
  std::optional<std::pair<double, double>> gap_hint;
};

/// Throws Error(InvalidInput) on malformed documents.
InstanceFile parse_instance(const std::string& text);

/// Canonical text form; numbers carry 17 significant digits.
std::string serialize_instance(const InstanceFile& file);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// FNV-1a 64-bit digest of the bytes, as "fnv1a64:<16 hex digits>".
std::string digest(const std::string& bytes);

}  // namespace subrot::cli
