#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "tempsweep/ability.hpp"
#include "tempsweep/endpoint.hpp"
#include "tempsweep/records.hpp"
#include "tempsweep/sampling.hpp"

namespace tempsweep {

struct JudgeConfig {
  std::string model = "gpt-3.5-turbo-0125";
  double temperature = 0.01;
};

/// Everything one sweep needs: which model, which temperatures, how many
/// repetitions, and the decoding defaults each request carries.
struct SweepPlan {
  std::string model_id;
  std::vector<double> grid;  // ascending temperatures
  int repetitions = 3;
  sampling::SamplingConfig defaults;  // seed here is the base seed
  std::filesystem::path dataset_path;
  Ability ability = Ability::CR;
  JudgeConfig judge;
  int concurrency = 8;

  void validate() const;
};

struct SweepResult {
  int completed = 0;    // records written by this run
  int resumed = 0;      // cells skipped because a record already existed
  int failed = 0;       // flagged failure records among completed
  int truncated = 0;    // prompts cut to fit the length budget
  bool interrupted = false;
};

/// Called after each append, still under the writer lock. Return false to
/// stop the sweep (new work is abandoned; in-flight requests finish and are
/// recorded). Tests use this as a deterministic kill switch.
using RecordHook = std::function<bool(const RunRecord&)>;

/// Runs the grid × dataset × repetitions sweep, appending one record per
/// cell to records_path. Cells that already have a record are skipped, so
/// rerunning after an interruption completes the set without re-querying.
/// Endpoint failures exhaust the client's retries and then produce a record
/// flagged "failed" (never a silent gap). Offline abilities (ICL/MT/SUMM)
/// are scored inline; judge abilities are left unscored for the judge pass.
/// timestamp_override >= 0 pins every record's timestamp (deterministic
/// output mode); pass -1 for wall-clock.
SweepResult run_sweep(const SweepPlan& plan, const ChatClient& client,
                      const std::filesystem::path& records_path,
                      const RecordHook& on_record = {}, std::int64_t timestamp_override = -1);

/// max_length is enforced client-side: prompts longer than
/// max_length - max_new_tokens whitespace tokens are truncated (the record
/// is flagged "prompt_truncated").
std::string truncate_prompt(const std::string& prompt, int max_length, int max_new_tokens,
                            bool* truncated = nullptr);

}  // namespace tempsweep
