#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace tempsweep {

/// The six ability codes. Closed set; serialized everywhere as the exact code.
enum class Ability { CR, CT, ICL, IF, MT, SUMM };

inline constexpr std::array<Ability, 6> kAllAbilities = {
    Ability::CR, Ability::CT, Ability::ICL, Ability::IF, Ability::MT, Ability::SUMM};

std::string_view to_string(Ability ability);
std::optional<Ability> parse_ability(std::string_view text);

/// CR, CT and IF are scored through judge verdicts; ICL, MT and SUMM are
/// scored offline from the raw output and a reference.
bool uses_judge(Ability ability);

}  // namespace tempsweep
