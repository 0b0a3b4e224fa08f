#pragma once

#include <span>
#include <string>
#include <string_view>

namespace contamix {

/// Shortest decimal text that parses back to exactly `value` ("nan", "inf" for non-finite).
std::string format_double(double value);

/// Comma-separated shortest round-trip coordinates.
std::string format_vector(std::span<const double> values);

/// Strict full-string double parse; throws InvalidArgument naming `what` on failure.
double parse_double(std::string_view text, std::string_view what);

}  // namespace contamix
