#include "tempsweep/judge.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "tempsweep/errors.hpp"
#include "tempsweep/scoring.hpp"

namespace tempsweep {

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open judge template: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* template_file(Ability ability) {
  switch (ability) {
    case Ability::CR: return "cr.txt";
    case Ability::CT: return "ct.txt";
    case Ability::IF: return "if.txt";
    default: throw InvalidInputError(std::string(to_string(ability)) + " has no judge template");
  }
}

}  // namespace

JudgeTemplates JudgeTemplates::load(const std::filesystem::path& dir) {
  JudgeTemplates out;
  for (const Ability ability : {Ability::CR, Ability::CT, Ability::IF})
    out.templates_[static_cast<int>(ability)] = slurp(dir / template_file(ability));
  return out;
}

const std::string& JudgeTemplates::for_ability(Ability ability) const {
  const auto it = templates_.find(static_cast<int>(ability));
  if (it == templates_.end())
    throw InvalidInputError(std::string(to_string(ability)) + " has no judge template");
  return it->second;
}

std::string JudgeTemplates::render(Ability ability,
                                   const std::map<std::string, std::string>& values) const {
  std::string text = for_ability(ability);
  for (const auto& [key, value] : values) {
    const std::string needle = "{" + key + "}";
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
      text.replace(pos, needle.size(), value);
      pos += value.size();
    }
  }
  return text;
}

std::optional<bool> parse_verdict(std::string_view reply) {
  bool yes = false, no = false;
  std::string word;
  const auto flush = [&] {
    if (word == "yes") yes = true;
    if (word == "no") no = true;
    word.clear();
  };
  for (const char c : reply) {
    if (std::isalpha(static_cast<unsigned char>(c)))
      word += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    else
      flush();
  }
  flush();
  if (yes == no) return std::nullopt;  // both or neither is ambiguous
  return yes;
}

std::vector<metrics::JudgeVerdict> judge_evaluate(const RunRecord& record,
                                                  const PromptInstance& instance,
                                                  const ChatClient& judge,
                                                  const JudgeConfig& config,
                                                  const JudgeTemplates& templates,
                                                  int parse_retries) {
  struct Question {
    std::string id;
    std::map<std::string, std::string> values;
  };
  std::vector<Question> questions;

  const std::map<std::string, std::string> base{{"prompt", instance.prompt_text},
                                                {"response", record.raw_output}};
  switch (record.ability) {
    case Ability::CR: {
      const auto& gold = std::get<CrGold>(instance.gold);
      std::string options;
      for (const auto& option : gold.options) options += "- " + option + "\n";
      auto values = base;
      values["options"] = options;
      values["answer"] = gold.answer;
      questions.push_back({"answer", std::move(values)});
      break;
    }
    case Ability::CT: {
      const auto& gold = std::get<CtGold>(instance.gold);
      for (std::size_t i = 0; i < gold.questions.size(); ++i) {
        auto values = base;
        values["question"] = gold.questions[i];
        questions.push_back({"q" + std::to_string(i + 1), std::move(values)});
      }
      break;
    }
    case Ability::IF: {
      const auto& gold = std::get<IfGold>(instance.gold);
      for (std::size_t i = 0; i < gold.requirements.size(); ++i) {
        auto values = base;
        values["question"] = gold.requirements[i];
        questions.push_back({"r" + std::to_string(i + 1), std::move(values)});
      }
      break;
    }
    default:
      throw InvalidInputError(std::string(to_string(record.ability)) + " is not judge-evaluated");
  }

  std::vector<metrics::JudgeVerdict> verdicts;
  for (const auto& question : questions) {
    ChatRequest request;
    request.model = config.model;
    request.messages = {{"user", templates.render(record.ability, question.values)}};
    request.temperature = config.temperature;
    request.max_tokens = 64;

    std::optional<bool> verdict;
    std::string reply;
    for (int attempt = 0; attempt <= parse_retries && !verdict; ++attempt) {
      request.seed = 42 + static_cast<std::uint64_t>(attempt);
      reply = judge.complete(request).content;
      verdict = parse_verdict(reply);
    }
    if (!verdict)
      throw JudgeAbstainError("judge reply for " + record.prompt_id + "/" + question.id +
                              " stayed unparseable after " + std::to_string(parse_retries + 1) +
                              " attempts");
    verdicts.push_back({question.id, *verdict, reply});
  }
  return verdicts;
}

JudgePassResult run_judge_pass(const std::filesystem::path& records_path,
                               const std::filesystem::path& dataset_path, Ability ability,
                               const ChatClient& judge, const JudgeConfig& config,
                               const JudgeTemplates& templates) {
  if (!uses_judge(ability))
    throw InvalidInputError(std::string(to_string(ability)) + " is scored offline, not judged");

  std::map<std::string, PromptInstance> instances;
  for (auto& instance : load_dataset(dataset_path, ability))
    instances.emplace(instance.prompt_id, std::move(instance));

  const auto latest = latest_by_key(read_records(records_path));
  RecordSink sink(records_path);

  JudgePassResult result;
  for (const auto& [key, record] : latest) {
    if (record.ability != ability || record.score || record.has_flag("failed") ||
        record.has_flag("judge_abstained")) {
      ++result.skipped;
      continue;
    }
    const auto found = instances.find(record.prompt_id);
    if (found == instances.end())
      throw InvalidInputError("record prompt '" + record.prompt_id + "' not in dataset " +
                              dataset_path.string());

    RunRecord updated = record;
    try {
      updated.judge_verdicts = judge_evaluate(record, found->second, judge, config, templates);
      updated.score = score_from_verdicts(record.ability, updated.judge_verdicts);
      ++result.judged;
    } catch (const JudgeAbstainError&) {
      updated.flags.push_back("judge_abstained");
      ++result.abstained;
    }
    sink.append(updated);
  }
  return result;
}

}  // namespace tempsweep
