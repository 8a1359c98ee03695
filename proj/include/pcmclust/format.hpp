#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace pcmclust {

/// Shortest-safe round-trip form: 17 significant digits.
std::string format_exact(double x);

/// Fixed-point with `decimals` digits, as used in human-readable reports.
std::string format_fixed(double x, int decimals = 3);

/// Parses a decimal number or a fraction "p/q" occupying the whole of `text`
/// (surrounding blanks ignored). Returns nullopt on malformed input.
std::optional<double> parse_number(std::string_view text);

std::string_view trim(std::string_view s) noexcept;

}  // namespace pcmclust
