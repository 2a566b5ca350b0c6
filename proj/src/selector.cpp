#include "tempsweep/selector.hpp"

#include <cmath>
#include <set>

#include "tempsweep/errors.hpp"
#include "tempsweep/metrics.hpp"
#include "tempsweep/util.hpp"

namespace tempsweep {

namespace {

std::string cell_name(const std::string& model_id, Ability ability, double temperature) {
  return model_id + "/" + std::string(to_string(ability)) + "/T=" + format_double(temperature);
}

}  // namespace

double argmax_temperature(const PerformanceTable& table, const std::string& model_id,
                          Ability ability) {
  // The grid every series is held to: the union of temperatures anywhere in
  // the table. A series missing one of them was swept incompletely.
  std::set<double> grid;
  for (const auto& row : table.rows()) grid.insert(row.temperature);
  if (grid.empty()) {
    throw CoverageError("performance table is empty", {cell_name(model_id, ability, 0.0)});
  }

  std::vector<std::string> missing;
  for (double t : grid) {
    if (table.find(model_id, ability, t) == nullptr) {
      missing.push_back(cell_name(model_id, ability, t));
    }
  }
  if (!missing.empty()) {
    throw CoverageError("performance table is missing " + std::to_string(missing.size()) +
                            " cell(s) for " + model_id + "/" + std::string(to_string(ability)),
                        missing);
  }

  double best_t = 0.0;
  double best_mean = 0.0;
  bool first = true;
  for (double t : grid) {  // ascending, so strict > keeps the lowest tie
    double mean = table.find(model_id, ability, t)->mean_score;
    if (first || mean > best_mean) {
      best_t = t;
      best_mean = mean;
      first = false;
    }
  }
  return best_t;
}

SelectionResult select_temperature(const std::string& prompt, const std::string& model_id,
                                   const PerformanceTable& table,
                                   const AbilityClassifier& classifier) {
  SelectionResult result;
  result.prediction = classifier.classify(prompt);
  result.t_star = argmax_temperature(table, model_id, result.prediction.label);
  return result;
}

SelectorEval evaluate_selector(const std::vector<PromptInstance>& benchmark,
                               const std::string& model_id, const PerformanceTable& table,
                               const AbilityClassifier& classifier, const ChatClient& endpoint,
                               double default_temperature, int repetitions, std::uint64_t base_seed) {
  if (benchmark.empty()) throw InvalidInputError("selector benchmark is empty");
  if (repetitions < 1) throw InvalidInputError("repetitions must be >= 1");

  auto run_once = [&](const PromptInstance& instance, double temperature,
                      std::uint64_t seed) -> int {
    ChatRequest request;
    request.model = model_id;
    request.messages = {{"user", instance.prompt_text}};
    request.temperature = temperature;
    request.seed = seed;
    const auto* gold = std::get_if<IclGold>(&instance.gold);
    if (gold == nullptr) {
      throw InvalidInputError("selector benchmark prompt '" + instance.prompt_id +
                              "' has no classification label");
    }
    return metrics::exact_match_cls(endpoint.complete(request).content, gold->label);
  };

  SelectorEval eval;
  int hits_default = 0;
  int hits_selected = 0;
  int total = 0;
  for (const auto& instance : benchmark) {
    double t_star = default_temperature;
    try {
      t_star = select_temperature(instance.prompt_text, model_id, table, classifier).t_star;
    } catch (const ClassificationError&) {
      ++eval.fallbacks;  // unclassifiable prompt: keep the default temperature
    }
    for (int rep = 0; rep < repetitions; ++rep) {
      std::uint64_t seed = base_seed + static_cast<std::uint64_t>(rep);
      hits_default += run_once(instance, default_temperature, seed);
      hits_selected += run_once(instance, t_star, seed);
      ++total;
    }
  }
  eval.acc_default = static_cast<double>(hits_default) / total;
  eval.acc_selected = static_cast<double>(hits_selected) / total;
  return eval;
}

}  // namespace tempsweep
