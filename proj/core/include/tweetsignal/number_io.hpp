#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace tweetsignal {

/// 17 significant digits; parses back to the identical double.
std::string format_exact(double value);
/// Shortest representation that round-trips.
std::string format_shortest(double value);
/// Fixed notation with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

/// Whole-string parse; accepts `inf`, `-inf` and `nan`.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

}  // namespace tweetsignal
