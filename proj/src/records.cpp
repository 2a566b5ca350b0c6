#include "tempsweep/records.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "tempsweep/errors.hpp"

namespace tempsweep {

using nlohmann::json;

namespace {

json require_field(const json& obj, const char* field, int line) {
  if (!obj.contains(field))
    throw ParseError("line " + std::to_string(line) + ": missing required field '" + field + "'",
                     line);
  return obj.at(field);
}

std::vector<std::string> string_array(const json& value, const char* field, int line) {
  if (!value.is_array() || value.empty())
    throw ParseError("line " + std::to_string(line) + ": field '" + field +
                         "' must be a non-empty array",
                     line);
  std::vector<std::string> out;
  for (const auto& item : value) {
    if (!item.is_string())
      throw ParseError("line " + std::to_string(line) + ": field '" + field +
                           "' must contain strings",
                       line);
    out.push_back(item.get<std::string>());
  }
  return out;
}

Gold parse_gold(const json& obj, Ability ability, int line) {
  switch (ability) {
    case Ability::CR: {
      CrGold gold;
      gold.options = string_array(require_field(obj, "options", line), "options", line);
      gold.answer = require_field(obj, "answer", line).get<std::string>();
      return gold;
    }
    case Ability::CT: {
      CtGold gold;
      gold.questions = string_array(require_field(obj, "questions", line), "questions", line);
      return gold;
    }
    case Ability::ICL: {
      IclGold gold;
      gold.label = require_field(obj, "label", line).get<std::string>();
      if (gold.label.empty())
        throw ParseError("line " + std::to_string(line) + ": field 'label' is empty", line);
      return gold;
    }
    case Ability::IF: {
      IfGold gold;
      gold.requirements =
          string_array(require_field(obj, "requirements", line), "requirements", line);
      return gold;
    }
    case Ability::MT: {
      MtGold gold;
      if (obj.contains("references")) {
        gold.references = string_array(obj.at("references"), "references", line);
      } else {
        gold.references = {require_field(obj, "reference", line).get<std::string>()};
      }
      return gold;
    }
    case Ability::SUMM: {
      SummGold gold;
      gold.reference = require_field(obj, "reference", line).get<std::string>();
      return gold;
    }
  }
  throw ParseError("line " + std::to_string(line) + ": unknown ability", line);
}

}  // namespace

std::vector<PromptInstance> load_dataset(const std::filesystem::path& path, Ability ability) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset file: " + path.string());

  std::vector<PromptInstance> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError("line " + std::to_string(line_no) + ": invalid JSON: " + e.what(), line_no);
    }

    PromptInstance instance;
    instance.prompt_id = require_field(obj, "prompt_id", line_no).get<std::string>();
    const std::string code = require_field(obj, "ability", line_no).get<std::string>();
    const auto parsed = parse_ability(code);
    if (!parsed)
      throw ParseError("line " + std::to_string(line_no) + ": unknown ability code '" + code + "'",
                       line_no);
    if (*parsed != ability)
      throw ParseError("line " + std::to_string(line_no) + ": record ability '" + code +
                           "' does not match requested " + std::string(to_string(ability)),
                       line_no);
    instance.ability = *parsed;
    instance.prompt_text = require_field(obj, "prompt_text", line_no).get<std::string>();
    instance.gold = parse_gold(obj, ability, line_no);
    out.push_back(std::move(instance));
  }
  return out;
}

bool RunRecord::has_flag(std::string_view flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

std::string RunRecord::to_json_line() const {
  json obj;
  obj["prompt_id"] = prompt_id;
  obj["model_id"] = model_id;
  obj["ability"] = std::string(to_string(ability));
  obj["temperature"] = temperature;
  obj["repetition_index"] = repetition_index;
  obj["seed"] = seed;
  obj["raw_output"] = raw_output;
  if (score) obj["score"] = *score;
  if (!judge_verdicts.empty()) {
    json verdicts = json::array();
    for (const auto& v : judge_verdicts) {
      verdicts.push_back({{"question_id", v.question_id},
                          {"verdict", v.verdict},
                          {"rationale", v.rationale}});
    }
    obj["judge_verdicts"] = std::move(verdicts);
  }
  if (!flags.empty()) obj["flags"] = flags;
  obj["timestamp"] = timestamp;
  return obj.dump();
}

RunRecord RunRecord::from_json_line(const std::string& line) {
  const json obj = json::parse(line);
  RunRecord record;
  record.prompt_id = obj.at("prompt_id").get<std::string>();
  record.model_id = obj.at("model_id").get<std::string>();
  const auto ability = parse_ability(obj.at("ability").get<std::string>());
  if (!ability) throw ParseError("record has unknown ability code");
  record.ability = *ability;
  record.temperature = obj.at("temperature").get<double>();
  record.repetition_index = obj.at("repetition_index").get<int>();
  record.seed = obj.at("seed").get<std::uint64_t>();
  record.raw_output = obj.at("raw_output").get<std::string>();
  if (obj.contains("score")) record.score = obj.at("score").get<double>();
  if (obj.contains("judge_verdicts")) {
    for (const auto& v : obj.at("judge_verdicts")) {
      record.judge_verdicts.push_back({v.at("question_id").get<std::string>(),
                                       v.at("verdict").get<bool>(),
                                       v.value("rationale", std::string())});
    }
  }
  if (obj.contains("flags")) record.flags = obj.at("flags").get<std::vector<std::string>>();
  record.timestamp = obj.value("timestamp", std::int64_t{0});
  return record;
}

RecordKey key_of(const RunRecord& record) {
  return {record.model_id, record.prompt_id, record.temperature, record.repetition_index};
}

RecordSink::RecordSink(const std::filesystem::path& path, bool append) : path_(path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  file_ = std::fopen(path.c_str(), append ? "ab" : "wb");
  if (!file_) throw Error("cannot open records file for writing: " + path.string());
}

RecordSink::~RecordSink() {
  if (file_) std::fclose(file_);
}

void RecordSink::append(const RunRecord& record) {
  const std::string line = record.to_json_line() + "\n";
  std::lock_guard<std::mutex> lock(mutex_);
  if (std::fwrite(line.data(), 1, line.size(), file_) != line.size())
    throw Error("short write to records file: " + path_.string());
  std::fflush(file_);
}

std::vector<RunRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open records file: " + path.string());
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  std::vector<RunRecord> out;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < content.size()) {
    ++line_no;
    const std::size_t nl = content.find('\n', pos);
    const bool terminated = nl != std::string::npos;
    std::string line = content.substr(pos, terminated ? nl - pos : std::string::npos);
    pos = terminated ? nl + 1 : content.size();
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      out.push_back(RunRecord::from_json_line(line));
    } catch (const std::exception& e) {
      // The sink writes each record plus its newline in one flushed call, so an
      // unterminated tail can only be an interrupted write; drop it silently.
      if (!terminated) break;
      throw ParseError("line " + std::to_string(line_no) + ": bad record: " + e.what(), line_no);
    }
  }
  return out;
}

std::map<RecordKey, RunRecord> latest_by_key(const std::vector<RunRecord>& records) {
  std::map<RecordKey, RunRecord> out;
  for (const auto& record : records) out.insert_or_assign(key_of(record), record);
  return out;
}

}  // namespace tempsweep
