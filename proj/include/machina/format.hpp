#pragma once

#include <string>

namespace machina {

/// %g-style rendering with `sig` significant digits. Infinity prints as
/// "inf", and negative zero is normalized to "0".
std::string format_number(double value, int sig = 12);

/// Parses a decimal literal or an exact fraction "a/b" (and "inf").
/// Returns false on malformed input.
bool parse_number(const std::string& text, double& out);

}  // namespace machina
