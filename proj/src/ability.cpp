#include "tempsweep/ability.hpp"

namespace tempsweep {

std::string_view to_string(Ability ability) {
  switch (ability) {
    case Ability::CR: return "CR";
    case Ability::CT: return "CT";
    case Ability::ICL: return "ICL";
    case Ability::IF: return "IF";
    case Ability::MT: return "MT";
    case Ability::SUMM: return "SUMM";
  }
  return "?";
}

std::optional<Ability> parse_ability(std::string_view text) {
  for (Ability a : kAllAbilities) {
    if (text == to_string(a)) return a;
  }
  return std::nullopt;
}

bool uses_judge(Ability ability) {
  return ability == Ability::CR || ability == Ability::CT || ability == Ability::IF;
}

}  // namespace tempsweep
