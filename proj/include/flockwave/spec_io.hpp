#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "flockwave/coupling.hpp"

namespace flockwave {

struct ParsedNumber {
  double value = 0.0;
  std::optional<Rational> exact;
};

/// Accepts decimal ("-0.75", "1e-3") or rational ("-289/432") text. Decimal
/// and rational text is kept exact when it fits in 64-bit integers.
ParsedNumber parse_number(std::string_view text);

/// Reads a flock spec document (JSON). Errors name the field path.
FlockSpec parse_spec(std::string_view text);

/// Reads the document without enforcing the coupling constraints, so that
/// invalid configs can still be reported by validate_config.
FlockSpec parse_spec_document(std::string_view text);

/// Writes the spec in normalized form; exact coefficients are written as
/// "p/q" strings so that parse_spec(serialize_spec(s)) == s.
std::string serialize_spec(const FlockSpec& spec);

std::string read_text_file(const std::string& path);
FlockSpec load_spec(const std::string& path);

}  // namespace flockwave
