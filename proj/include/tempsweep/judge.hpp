#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "tempsweep/endpoint.hpp"
#include "tempsweep/metrics.hpp"
#include "tempsweep/records.hpp"
#include "tempsweep/sweep.hpp"

namespace tempsweep {

/// One template text file per judge-evaluated ability. Placeholders:
/// {prompt}, {response}, {question}, {options}, {answer}.
class JudgeTemplates {
 public:
  static JudgeTemplates load(const std::filesystem::path& dir);

  const std::string& for_ability(Ability ability) const;
  std::string render(Ability ability, const std::map<std::string, std::string>& values) const;

 private:
  std::map<int, std::string> templates_;
};

/// Extracts a boolean verdict from a judge reply. The reply must contain the
/// word yes or the word no (case-insensitive) but not both; anything else is
/// unparseable and returns nullopt.
std::optional<bool> parse_verdict(std::string_view reply);

/// Asks the judge one question per decomposed gold item (CR: one comparison
/// against the gold option; CT: one per creativity question; IF: one per
/// requirement), always at the judge temperature. An unparseable reply is
/// retried with a bumped seed up to `parse_retries` extra attempts, then
/// raises JudgeAbstainError.
std::vector<metrics::JudgeVerdict> judge_evaluate(const RunRecord& record,
                                                  const PromptInstance& instance,
                                                  const ChatClient& judge,
                                                  const JudgeConfig& config,
                                                  const JudgeTemplates& templates,
                                                  int parse_retries = 2);

struct JudgePassResult {
  int judged = 0;     // records scored this pass
  int abstained = 0;  // records flagged judge_abstained
  int skipped = 0;    // already scored or non-judge records
};

/// Scores every unscored judge-ability record in the file by re-appending a
/// scored copy (the record store keeps the latest version per cell).
JudgePassResult run_judge_pass(const std::filesystem::path& records_path,
                               const std::filesystem::path& dataset_path, Ability ability,
                               const ChatClient& judge, const JudgeConfig& config,
                               const JudgeTemplates& templates);

}  // namespace tempsweep
