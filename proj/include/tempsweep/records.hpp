#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "tempsweep/ability.hpp"
#include "tempsweep/metrics.hpp"

namespace tempsweep {

// Gold payload variants, one per ability.
struct CrGold {
  std::vector<std::string> options;
  std::string answer;
};
struct CtGold {
  std::vector<std::string> questions;
};
struct IclGold {
  std::string label;
};
struct IfGold {
  std::vector<std::string> requirements;
};
struct MtGold {
  std::vector<std::string> references;
};
struct SummGold {
  std::string reference;
};
using Gold = std::variant<CrGold, CtGold, IclGold, IfGold, MtGold, SummGold>;

/// One benchmark question. The ability determines which gold variant holds.
struct PromptInstance {
  std::string prompt_id;
  Ability ability = Ability::CR;
  std::string prompt_text;
  Gold gold;
};

/// Parses the line-delimited dataset format. Malformed lines raise ParseError
/// naming the offending field and 1-based line number.
std::vector<PromptInstance> load_dataset(const std::filesystem::path& path, Ability ability);

/// One scored model response at one (model, temperature, repetition).
struct RunRecord {
  std::string prompt_id;
  std::string model_id;
  Ability ability = Ability::CR;
  double temperature = 0.0;
  int repetition_index = 0;
  std::uint64_t seed = 0;
  std::string raw_output;
  std::optional<double> score;
  std::vector<metrics::JudgeVerdict> judge_verdicts;
  std::vector<std::string> flags;
  std::int64_t timestamp = 0;

  bool has_flag(std::string_view flag) const;
  std::string to_json_line() const;
  static RunRecord from_json_line(const std::string& line);
};

/// Identity of a sweep cell; one completed record per key.
using RecordKey = std::tuple<std::string, std::string, double, int>;  // model, prompt, T, rep
RecordKey key_of(const RunRecord& record);

/// Serialized append-only writer. Each record is one full line, flushed
/// immediately, so an interrupted run loses at most the line being written.
class RecordSink {
 public:
  explicit RecordSink(const std::filesystem::path& path, bool append = true);
  ~RecordSink();
  void append(const RunRecord& record);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::FILE* file_;
  std::mutex mutex_;
};

/// Reads every parseable record in file order. A torn final line (interrupted
/// write) is dropped; malformed interior lines raise ParseError.
std::vector<RunRecord> read_records(const std::filesystem::path& path);

/// Last record per key, in key order -- judge passes re-append updated
/// records, and the latest one wins.
std::map<RecordKey, RunRecord> latest_by_key(const std::vector<RunRecord>& records);

}  // namespace tempsweep
