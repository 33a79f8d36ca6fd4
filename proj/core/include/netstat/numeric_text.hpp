#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace netstat {

/// Shortest decimal text that reads back to the same double, never in
/// scientific notation. Integral values print without a fraction.
/// Non-finite values print as `nan`, `inf`, `-inf`.
std::string format_number(double x);

/// Fixed notation with `digits` decimals.
std::string format_fixed(double x, int digits);

/// Parses integer, decimal or scientific notation; a leading `+` is allowed.
/// Returns nullopt for anything else, including non-finite values.
std::optional<double> parse_number(std::string_view text);

/// Parses a base-10 unsigned integer without sign or fraction.
std::optional<unsigned long long> parse_unsigned(std::string_view text);

}  // namespace netstat
