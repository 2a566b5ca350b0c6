#include "tempsweep/sweep.hpp"

#include <atomic>
#include <chrono>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "tempsweep/errors.hpp"
#include "tempsweep/scoring.hpp"

namespace tempsweep {

void SweepPlan::validate() const {
  if (model_id.empty()) throw InvalidInputError("sweep plan: model_id is empty");
  if (grid.empty()) throw InvalidInputError("sweep plan: temperature grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0 && grid[i] <= grid[i - 1])
      throw InvalidInputError("sweep plan: grid temperatures must be strictly ascending");
    sampling::SamplingConfig probe = defaults;
    probe.temperature = grid[i];
    probe.validate();
  }
  if (repetitions < 1) throw InvalidInputError("sweep plan: repetitions must be >= 1");
  if (concurrency < 1) throw InvalidInputError("sweep plan: concurrency must be >= 1");
}

std::string truncate_prompt(const std::string& prompt, int max_length, int max_new_tokens,
                            bool* truncated) {
  if (truncated) *truncated = false;
  const int budget = std::max(1, max_length - max_new_tokens);

  // Count whitespace-delimited chunks, keeping the original spelling.
  std::istringstream in(prompt);
  std::vector<std::string> chunks;
  std::string chunk;
  while (in >> chunk) chunks.push_back(chunk);
  if (static_cast<int>(chunks.size()) <= budget) return prompt;

  if (truncated) *truncated = true;
  std::string out;
  for (int i = 0; i < budget; ++i) {
    if (i > 0) out += ' ';
    out += chunks[static_cast<std::size_t>(i)];
  }
  return out;
}

namespace {

struct WorkItem {
  const PromptInstance* instance;
  double temperature;
  int repetition;
};

}  // namespace

SweepResult run_sweep(const SweepPlan& plan, const ChatClient& client,
                      const std::filesystem::path& records_path, const RecordHook& on_record,
                      std::int64_t timestamp_override) {
  plan.validate();
  const auto dataset = load_dataset(plan.dataset_path, plan.ability);
  if (dataset.empty()) throw InvalidInputError("sweep plan: dataset is empty");

  // Resume: any existing record claims its cell, including flagged failures.
  std::set<RecordKey> done;
  if (std::filesystem::exists(records_path))
    for (const auto& [key, record] : latest_by_key(read_records(records_path)))
      done.insert(key);

  SweepResult result;
  std::vector<WorkItem> work;
  for (const auto& instance : dataset)
    for (const double temperature : plan.grid)
      for (int rep = 0; rep < plan.repetitions; ++rep) {
        if (done.count({plan.model_id, instance.prompt_id, temperature, rep})) {
          ++result.resumed;
          continue;
        }
        work.push_back({&instance, temperature, rep});
      }

  RecordSink sink(records_path);
  std::mutex state_mutex;  // serializes append + hook + counters
  std::atomic<bool> stopping{false};
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (;;) {
      if (stopping.load()) return;
      const std::size_t index = next.fetch_add(1);
      if (index >= work.size()) return;
      const WorkItem& item = work[index];

      RunRecord record;
      record.prompt_id = item.instance->prompt_id;
      record.model_id = plan.model_id;
      record.ability = plan.ability;
      record.temperature = item.temperature;
      record.repetition_index = item.repetition;
      record.seed = plan.defaults.seed + static_cast<std::uint64_t>(item.repetition);
      record.timestamp =
          timestamp_override >= 0
              ? timestamp_override
              : std::chrono::duration_cast<std::chrono::seconds>(
                    std::chrono::system_clock::now().time_since_epoch())
                    .count();

      bool was_truncated = false;
      const std::string prompt =
          truncate_prompt(item.instance->prompt_text, plan.defaults.max_length,
                          plan.defaults.max_new_tokens, &was_truncated);
      if (was_truncated) record.flags.push_back("prompt_truncated");

      ChatRequest request;
      request.model = plan.model_id;
      request.messages = {{"user", prompt}};
      request.temperature = item.temperature;
      request.top_p = plan.defaults.top_p;
      request.repetition_penalty = plan.defaults.repetition_penalty;
      request.top_k = plan.defaults.top_k;
      request.max_tokens = plan.defaults.max_new_tokens;
      request.seed = record.seed;

      bool failed = false;
      try {
        const auto reply = client.complete(request);
        record.raw_output = reply.content;
        if (reply.attempts > 1) record.flags.push_back("retried");
        if (!uses_judge(plan.ability)) {
          const auto scored = score_offline(*item.instance, record.raw_output);
          record.score = scored.value;
          if (scored.degenerate) record.flags.push_back("degenerate");
        }
      } catch (const EndpointError&) {
        record.flags.push_back("failed");
        failed = true;
      }

      bool stop_now = false;
      {
        std::lock_guard<std::mutex> lock(state_mutex);
        sink.append(record);
        ++result.completed;
        if (failed) ++result.failed;
        if (was_truncated) ++result.truncated;
        if (on_record && !on_record(record)) stop_now = true;
      }
      if (stop_now) {
        stopping.store(true);
        return;
      }
    }
  };

  const int threads = std::min<int>(plan.concurrency, static_cast<int>(work.size()));
  std::vector<std::thread> pool;
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  result.interrupted = stopping.load();
  return result;
}

}  // namespace tempsweep
