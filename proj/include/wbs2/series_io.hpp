#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace wbs2 {

/// Reads a numeric series. Without `column` every non-blank, non-'#' line
/// holds one value. With a 1-based `column` lines are comma-separated and
/// that field is taken; a non-numeric first row is treated as a header.
std::vector<double> read_series(std::istream& in, std::optional<std::size_t> column = {});

/// One value per line, printed with round-trip precision.
void write_series(std::ostream& out, std::span<const double> values);

}  // namespace wbs2
