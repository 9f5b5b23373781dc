#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace stocksel::decimal {

/// Prices and currency fields carry 4 fractional digits of guaranteed
/// precision (A-share tick sizes). Values are held as doubles; these helpers
/// give an exact canonical text form for any value on the 1e-4 grid.

std::optional<double> parse(std::string_view text);

/// Canonical form: round to 4 fractional digits, trim trailing zeros.
/// parse(format(x)) == quantize(x) for |x| < 9e14.
std::string format(double value);

/// Nearest value on the 1e-4 grid (ties away from zero).
double quantize(double value);

std::optional<std::int64_t> parse_int(std::string_view text);

}  // namespace stocksel::decimal
