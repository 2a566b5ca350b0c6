#pragma once

#include <span>
#include <string_view>

#include "tempsweep/metrics.hpp"
#include "tempsweep/records.hpp"
#include "tempsweep/tokenize.hpp"

namespace tempsweep {

// Evaluation-source routing. MT, SUMM and ICL are scored offline from the raw
// output alone; CR, CT and IF need judge verdicts (see judge.hpp).
//
//   CR   -> top1 over repetitions of judged correctness
//   CT   -> ttcw_accuracy over creativity verdicts
//   ICL  -> exact_match_cls against the gold label
//   IF   -> drfr over requirement verdicts
//   MT   -> bleu_normalized against reference translations
//   SUMM -> rouge_l_f1 against the reference summary

/// Scores one raw output for an offline ability. Throws InvalidInputError for
/// judge-evaluated abilities.
metrics::ScoreResult score_offline(const PromptInstance& instance, std::string_view raw_output,
                                   const metrics::Tokenizer& tokenizer = metrics::default_tokenizer());

/// Turns a judge verdict list into the record score for a judge-evaluated
/// ability (CR: the single verdict, CT: ttcw, IF: drfr).
double score_from_verdicts(Ability ability, std::span<const metrics::JudgeVerdict> verdicts);

}  // namespace tempsweep
