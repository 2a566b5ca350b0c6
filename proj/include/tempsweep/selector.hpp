#pragma once

#include <string>
#include <vector>

#include "tempsweep/classifier.hpp"
#include "tempsweep/perf_table.hpp"
#include "tempsweep/records.hpp"

namespace tempsweep {

/// Grid temperature with the maximal mean score for (model, ability); equal
/// means resolve to the lowest temperature. The expected grid is the union
/// of temperatures across the whole table; any expected cell this series
/// lacks is reported via CoverageError's missing-cell list.
double argmax_temperature(const PerformanceTable& table, const std::string& model_id,
                          Ability ability);

struct SelectionResult {
  double t_star = 1.0;
  AbilityPrediction prediction;
};

/// T* = argmax over the predicted ability's row. Classification errors
/// propagate; callers that want a default-temperature fallback catch
/// ClassificationError themselves.
SelectionResult select_temperature(const std::string& prompt, const std::string& model_id,
                                   const PerformanceTable& table,
                                   const AbilityClassifier& classifier);

struct SelectorEval {
  double acc_default = 0.0;   // accuracy at the fixed default temperature
  double acc_selected = 0.0;  // accuracy at per-prompt T*
  int fallbacks = 0;          // prompts where classification failed -> default T
};

/// Runs every benchmark prompt `repetitions` times at the default temperature
/// and at its selected T* (seeds base, base+1, ...), scoring by exact match
/// against the gold label.
SelectorEval evaluate_selector(const std::vector<PromptInstance>& benchmark,
                               const std::string& model_id, const PerformanceTable& table,
                               const AbilityClassifier& classifier, const ChatClient& endpoint,
                               double default_temperature = 1.0, int repetitions = 3,
                               std::uint64_t base_seed = 42);

}  // namespace tempsweep
