#include "tempsweep/scoring.hpp"

#include "tempsweep/errors.hpp"

namespace tempsweep {

metrics::ScoreResult score_offline(const PromptInstance& instance, std::string_view raw_output,
                                   const metrics::Tokenizer& tokenizer) {
  switch (instance.ability) {
    case Ability::ICL: {
      const auto& gold = std::get<IclGold>(instance.gold);
      return {static_cast<double>(metrics::exact_match_cls(raw_output, gold.label)), false};
    }
    case Ability::MT: {
      const auto& gold = std::get<MtGold>(instance.gold);
      return metrics::bleu_normalized(raw_output, gold.references, tokenizer);
    }
    case Ability::SUMM: {
      const auto& gold = std::get<SummGold>(instance.gold);
      return metrics::rouge_l_f1(raw_output, gold.reference, tokenizer);
    }
    default:
      throw InvalidInputError(std::string(to_string(instance.ability)) +
                              " is judge-evaluated; no offline score");
  }
}

double score_from_verdicts(Ability ability, std::span<const metrics::JudgeVerdict> verdicts) {
  switch (ability) {
    case Ability::CR:
      if (verdicts.size() != 1)
        throw InvalidInputError("CR expects exactly one verdict, got " +
                                std::to_string(verdicts.size()));
      return verdicts[0].verdict ? 1.0 : 0.0;
    case Ability::CT:
      return metrics::ttcw_accuracy(verdicts);
    case Ability::IF:
      return metrics::drfr(verdicts);
    default:
      throw InvalidInputError(std::string(to_string(ability)) + " is scored offline, not judged");
  }
}

}  // namespace tempsweep
