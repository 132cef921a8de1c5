#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace zakai {

/// Decimal text with 17 significant digits; parses back to the same double.
std::string format_real(double value);

/// Strict parse of a whole token; throws ValidationError naming `what`.
double parse_real(std::string_view token, std::string_view what);
long long parse_integer(std::string_view token, std::string_view what);

std::string_view trim(std::string_view text);
std::vector<std::string> split_whitespace(std::string_view text);

}  // namespace zakai
