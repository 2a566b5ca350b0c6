#pragma once

#include <string_view>
#include <vector>

namespace tempsweep {

inline constexpr std::string_view kDefaultGrid = "0.1:1.9:0.3";

/// Expands a "start:stop:step" expression into the inclusive temperature
/// grid. The stop endpoint is included when a step multiple lands within
/// 1e-9 of it, and every value is snapped to 9 decimals so accumulated
/// float error never reaches keys, file names or table lookups.
/// Malformed expressions raise InvalidInputError.
std::vector<double> parse_grid(std::string_view spec);

}  // namespace tempsweep
