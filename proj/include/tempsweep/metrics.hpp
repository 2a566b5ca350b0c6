#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tempsweep/tokenize.hpp"

namespace tempsweep::metrics {

/// One boolean judge decision for one decomposed question.
struct JudgeVerdict {
  std::string question_id;
  bool verdict = false;
  std::string rationale;
};

/// One scored model response. score is already normalized to [0, 1].
struct ScoredResponse {
  std::string prompt_id;
  int repetition_index = 0;
  std::string raw_text;
  double score = 0.0;
};

/// Metric value plus a degenerate-input marker. Degenerate inputs (empty after
/// tokenization) score 0 and set the flag instead of aborting a sweep.
struct ScoreResult {
  double value = 0.0;
  bool degenerate = false;
};

/// F1 over the longest common subsequence of the two token sequences.
ScoreResult rouge_l_f1(std::string_view candidate, std::string_view reference,
                       const Tokenizer& tokenizer = default_tokenizer());

/// Sentence-level BLEU with clipped n-gram counts, brevity penalty and
/// add-one smoothing on orders above 1. Precisions are fractions, so the
/// result is already in [0, 1].
ScoreResult bleu_normalized(std::string_view candidate, std::span<const std::string> references,
                            const Tokenizer& tokenizer = default_tokenizer(), int max_n = 4);

struct NormalizePolicy {
  bool trim = true;
  bool casefold = true;
  bool strip_surrounding_punct = true;
};

std::string normalize_answer(std::string_view text, const NormalizePolicy& policy = {});

/// 1 iff the normalized candidate equals the normalized gold label exactly.
/// Whole-answer match; substring hits do not count.
int exact_match_cls(std::string_view candidate, std::string_view gold_label,
                    const NormalizePolicy& policy = {});

/// Index of the modal choice; ties broken by the choice whose first
/// occurrence is earliest. Shared by top1_accuracy and sweep aggregation.
std::size_t modal_choice(std::span<const std::string> choices);

/// Majority vote across repetition choices (ties broken by earliest
/// repetition), then compared to gold.
int top1_accuracy(std::span<const std::string> per_repetition_choices, std::string_view gold);

/// Fraction of decomposed requirements the judge marked satisfied.
double drfr(std::span<const JudgeVerdict> verdicts);

/// Fraction of positive creativity verdicts across all question/answer pairs.
/// Same ratio as drfr; kept distinct because verdicts group per story and
/// dimension.
double ttcw_accuracy(std::span<const JudgeVerdict> verdicts);

}  // namespace tempsweep::metrics
