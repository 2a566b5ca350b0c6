// Regenerates the committed fixture files under data/fixtures/.
//
// MT and SUMM references are the mock model's near-greedy continuations, so
// sweep scores start near 1.0 at low temperature and decay as sampling gets
// hotter -- the shape the analyze/report paths expect. Selector fixtures use
// the canonical-label rule shared with the rigged mock server. Rerunning is
// byte-stable.

#include <fstream>
#include <iostream>
#include <vector>

#include <json.hpp>

#include "tempsweep/mock_model.hpp"
#include "tempsweep/mock_server.hpp"
#include "tempsweep/perf_table.hpp"

using namespace tempsweep;
using nlohmann::json;

namespace {

std::string greedy_reference(const TrigramModel& model, const std::string& prompt, int tokens) {
  sampling::SamplingConfig config;
  config.temperature = 1e-5;  // greedy path
  config.max_new_tokens = tokens;
  return model.generate(prompt, config);
}

void write_lines(const std::filesystem::path& path, const std::vector<json>& lines) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  for (const auto& line : lines) out << line.dump() << "\n";
  std::cout << "wrote " << path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path root = argc > 1 ? argv[1] : ".";
  const auto fixtures = root / "data" / "fixtures";
  const auto model = TrigramModel::load(root / "data" / "mock_model.json");

  {
    const std::vector<std::string> prompts{
        "Translate the following sentence to English: le chat est assis sur le tapis",
        "Translate the following sentence to English: il fait beau aujourd'hui",
    };
    std::vector<json> lines;
    for (std::size_t i = 0; i < prompts.size(); ++i)
      lines.push_back({{"prompt_id", "mt-" + std::to_string(i + 1)},
                       {"ability", "MT"},
                       {"prompt_text", prompts[i]},
                       {"references", {greedy_reference(model, prompts[i], 24)}}});
    write_lines(fixtures / "mt_small.jsonl", lines);
  }

  {
    const std::vector<std::string> prompts{
        "Summarize the following article in one sentence: the committee met for three hours",
        "Summarize the following article in one sentence: markets rose sharply on friday",
    };
    std::vector<json> lines;
    for (std::size_t i = 0; i < prompts.size(); ++i)
      lines.push_back({{"prompt_id", "summ-" + std::to_string(i + 1)},
                       {"ability", "SUMM"},
                       {"prompt_text", prompts[i]},
                       {"reference", greedy_reference(model, prompts[i], 24)}});
    write_lines(fixtures / "summ_small.jsonl", lines);
  }

  {
    std::vector<json> lines;
    for (int i = 1; i <= 3; ++i) {
      const std::string prompt =
          "Which option is correct for test item " + std::to_string(i) + "?";
      lines.push_back({{"prompt_id", "cr-" + std::to_string(i)},
                       {"ability", "CR"},
                       {"prompt_text", prompt},
                       {"options", {"alpha", "beta"}},
                       {"answer", mock_canonical_label(prompt)}});
    }
    write_lines(fixtures / "cr_small.jsonl", lines);
  }

  {
    std::vector<json> lines;
    for (int i = 1; i <= 2; ++i)
      lines.push_back(
          {{"prompt_id", "ct-" + std::to_string(i)},
           {"ability", "CT"},
           {"prompt_text", "Write a very short story about journey number " + std::to_string(i)},
           {"questions",
            {"Is the story original rather than derivative?",
             "Does the story maintain a consistent narrative voice?",
             "Does the story contain at least one vivid image?",
             "Does the story have a coherent ending?"}}});
    write_lines(fixtures / "ct_small.jsonl", lines);
  }

  {
    std::vector<json> lines;
    for (int i = 1; i <= 2; ++i)
      lines.push_back(
          {{"prompt_id", "if-" + std::to_string(i)},
           {"ability", "IF"},
           {"prompt_text", "Describe object number " + std::to_string(i) +
                               " in exactly two sentences without using the word very"},
           {"requirements",
            {"The response describes the requested object.",
             "The response contains exactly two sentences.",
             "The response does not use the word very.",
             "The response is written in English."}}});
    write_lines(fixtures / "if_small.jsonl", lines);
  }

  {
    // Benchmark for the selector-benefit demo: label text follows the
    // canonical rule the rigged server replays.
    std::vector<json> lines;
    for (int i = 1; i <= 20; ++i) {
      const std::string prompt =
          "Classify the following input with the correct label, answering alpha or beta: "
          "sample input number " +
          std::to_string(i);
      lines.push_back({{"prompt_id", "sel-" + std::to_string(i)},
                       {"ability", "ICL"},
                       {"prompt_text", prompt},
                       {"label", mock_canonical_label(prompt)}});
    }
    write_lines(fixtures / "selector_icl.jsonl", lines);
  }

  {
    // Performance table whose argmax sits at T = 0.4 for every ability, so a
    // correct selector always lands on the rigged server's favored cell.
    PerformanceTable table;
    const std::vector<double> grid{0.1, 0.4, 0.7, 1.0, 1.3, 1.6, 1.9};
    const std::vector<double> shape{0.62, 0.81, 0.66, 0.52, 0.43, 0.31, 0.22};
    for (const Ability ability : kAllAbilities)
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double wiggle =
            0.01 * static_cast<double>((static_cast<int>(ability) + 1) % 3);
        table.set("mock-1b", ability, grid[i], {shape[i] - wiggle, 0.05, 3});
      }
    save_table_csv(table, fixtures / "selector_table.csv");
    std::cout << "wrote " << (fixtures / "selector_table.csv").string() << "\n";
  }

  return 0;
}
