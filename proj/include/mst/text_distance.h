#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

namespace mst {

/// Levenshtein distance over bytes (unit-cost insert/delete/substitute).
std::size_t edit_distance(std::string_view a, std::string_view b);

/// Distance if it is at most `limit`, otherwise nullopt. Runs in
/// O(len * limit) using a diagonal band.
std::optional<std::size_t> bounded_edit_distance(std::string_view a, std::string_view b,
                                                 std::size_t limit);

/// True iff edit_distance(a, b) <= fraction * max(|a|, |b|).
bool within_relative_distance(std::string_view a, std::string_view b, double fraction);

}  // namespace mst
