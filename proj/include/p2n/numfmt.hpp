#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace p2n {

/// Shortest decimal text that parses back to exactly `value`.
/// Negative zero is written as "-0.0" so JSON readers keep the sign.
std::string format_double(double value);

/// Appends format_double(value) to `out` without a temporary.
void append_double(std::string& out, double value);

/// Parses the whole of `text` as a double; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view text);

}  // namespace p2n
